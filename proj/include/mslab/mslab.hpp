#pragma once

#include "mslab/bigcount.hpp"
#include "mslab/bitstream.hpp"
#include "mslab/distributions.hpp"
#include "mslab/error.hpp"
#include "mslab/lossless_codec.hpp"
#include "mslab/markov_empirical.hpp"
#include "mslab/multiset_core.hpp"
#include "mslab/order_stats.hpp"
#include "mslab/quadrature.hpp"
#include "mslab/quantizer.hpp"
#include "mslab/rd_bounds.hpp"
#include "mslab/universal_codec.hpp"
