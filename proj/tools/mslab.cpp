// mslab: command-line front end for the multiset source coding library.
//
// Exit codes: 0 success, 1 computation error, 2 usage error.
// Results are buffered and written only after the whole computation succeeds.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mslab/json_io.hpp"
#include "mslab/mslab.hpp"

namespace {

using nlohmann::json;
using namespace mslab;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string in;
  std::string format = "csv";
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw usage_error("cannot open input '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

template <class T>
std::vector<T> parse_numbers(const std::string& text, const char* what) {
  std::istringstream in(text);
  std::vector<T> v;
  std::string tok;
  while (in >> tok) {
    std::istringstream ts(tok);
    T x{};
    if (!(ts >> x) || !ts.eof()) throw usage_error(std::string(what) + ": '" + tok + "' is not a valid number");
    v.push_back(x);
  }
  return v;
}

std::vector<std::uint64_t> parse_letters(const std::string& text) {
  std::vector<std::uint64_t> v;
  for (auto x : parse_numbers<long long>(text, "input")) {
    if (x < 0) throw usage_error("input: letters must be nonnegative");
    v.push_back(static_cast<std::uint64_t>(x));
  }
  return v;
}

/// Grid syntax: "2^a:2^b" or "x:y" (doubling), or a comma-separated list.
std::vector<std::uint64_t> parse_grid(const std::string& spec) {
  auto value = [](const std::string& s) -> std::uint64_t {
    try {
      if (auto caret = s.find('^'); caret != std::string::npos) {
        const auto base = std::stoull(s.substr(0, caret));
        const auto e = std::stoull(s.substr(caret + 1));
        if (base != 2 || e > 62) throw usage_error("grid: only powers 2^e with e <= 62 are supported");
        return std::uint64_t{1} << e;
      }
      std::size_t used = 0;
      const auto v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const usage_error&) {
      throw;
    } catch (const std::exception&) {
      throw usage_error("grid: cannot parse '" + s + "'");
    }
  };
  std::vector<std::uint64_t> out;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    const auto lo = value(spec.substr(0, colon)), hi = value(spec.substr(colon + 1));
    if (lo < 1 || hi < lo) throw usage_error("grid: need 1 <= start <= end");
    for (std::uint64_t n = lo; n <= hi; n *= 2) {
      out.push_back(n);
      if (n > hi / 2) break;
    }
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(value(item));
  }
  if (out.empty()) throw usage_error("grid: empty");
  return out;
}

struct Csv {
  std::string text;
  explicit Csv(const std::string& header) : text(header + "\n") {}
  template <class... Ts>
  void row(const Ts&... cells) {
    std::size_t i = 0;
    ((text += (i++ ? "," : "") + cell(cells)), ...);
    text += "\n";
  }
  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  static std::string cell(const char* s) { return cell(std::string(s)); }
  static std::string cell(double v) { return fmt(v); }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }
};

bool want_json(const Globals& g) { return g.format == "json"; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t require_seed(const Globals& g, const char* cmd) {
  if (!g.seed) throw usage_error(std::string(cmd) + " is randomized and requires --seed");
  return *g.seed;
}

json big_json(const BigCount& x) {
  if (x <= BigCount(std::numeric_limits<std::uint64_t>::max())) return x.convert_to<std::uint64_t>();
  return to_string(x);
}

// ---------------------------------------------------------------------------

struct TypeCountArgs {
  std::uint64_t n = 0;
  std::uint64_t alphabet = 0;
};

std::string cmd_type_count(const Globals& g, const TypeCountArgs& a) {
  if (a.alphabet < 1) throw usage_error("--alphabet must be >= 1");
  const auto c = type_count(a.n, a.alphabet);
  if (want_json(g))
    return dump({{"n", a.n}, {"alphabet_size", a.alphabet}, {"type_count", big_json(c)},
                 {"enum_code_bits", ceil_log2(c)}});
  return to_string(c) + "\n";
}

struct EntropyArgs {
  std::string mode = "exact";
  std::uint64_t n = 0;
  std::string parent;
  double p = 0.5;
};

std::string cmd_entropy(const Globals& g, const EntropyArgs& a) {
  if (a.n < 1) throw usage_error("--n must be >= 1");
  if (a.mode == "asymptotic") {
    double p = a.p;
    if (!a.parent.empty()) {
      const auto pmf = json_io::discrete_parent(a.parent);
      if (pmf.size() != 2) throw usage_error("asymptotic mode needs a binary parent");
      p = pmf.probs()[0];
    }
    const double h_exact = binomial_entropy_exact(a.n, p);
    const double h_asym = binomial_entropy_asymptotic(a.n, p);
    if (want_json(g)) return dump({{"mode", a.mode}, {"n", a.n}, {"p", p}, {"exact_bits", h_exact}, {"asymptotic_bits", h_asym}});
    Csv csv("mode,n,p,exact_bits,asymptotic_bits");
    csv.row(a.mode, a.n, p, h_exact, h_asym);
    return csv.text;
  }
  if (a.parent.empty()) throw usage_error("--parent is required for mode " + a.mode);
  const auto pmf = json_io::discrete_parent(a.parent);
  if (a.mode == "exact") {
    const double h = multiset_entropy_exact(a.n, pmf);
    const double hs = a.n * pmf.entropy();
    if (want_json(g))
      return dump({{"mode", a.mode}, {"n", a.n}, {"multiset_entropy_bits", h}, {"sequence_entropy_bits", hs}});
    Csv csv("mode,n,multiset_entropy_bits,sequence_entropy_bits");
    csv.row(a.mode, a.n, h, hs);
    return csv.text;
  }
  if (a.mode == "decomposition") {
    const auto d = entropy_decomposition_check(SequenceDistribution::iid(pmf, a.n));
    if (want_json(g))
      return dump({{"n", a.n}, {"h_sequence", d.h_sequence}, {"h_multiset", d.h_multiset},
                   {"h_order", d.h_order}, {"h_order_exchangeable", d.h_order_exchangeable},
                   {"residual", d.residual}, {"exchangeable", d.exchangeable}});
    Csv csv("n,h_sequence,h_multiset,h_order,h_order_exchangeable,residual,exchangeable");
    csv.row(a.n, d.h_sequence, d.h_multiset, d.h_order, d.h_order_exchangeable, d.residual,
            std::string(d.exchangeable ? "true" : "false"));
    return csv.text;
  }
  throw usage_error("--mode must be exact, asymptotic or decomposition");
}

struct CodecArgs {
  std::string codec = "enum";
  std::uint64_t n = 0;
  std::uint64_t alphabet = 0;
  std::string parent;
  std::uint64_t blocks = 1;
};

struct CodecSetup {
  std::uint64_t n;
  std::uint64_t alphabet;
  std::optional<PrefixCode> code;
};

CodecSetup codec_setup(const CodecArgs& a) {
  CodecSetup s{a.n, a.alphabet, std::nullopt};
  if (a.n < 1) throw usage_error("--n must be >= 1");
  if (a.codec == "huffman") {
    if (a.parent.empty()) throw usage_error("--codec huffman requires --parent");
    const auto pmf = json_io::discrete_parent(a.parent);
    if (s.alphabet != 0 && s.alphabet != pmf.size())
      throw usage_error("--alphabet differs from the parent's alphabet size");
    s.alphabet = pmf.size();
    s.code = build_optimal_code(a.n, pmf);
  } else if (a.codec == "enum") {
    if (s.alphabet == 0 && !a.parent.empty()) s.alphabet = json_io::discrete_parent(a.parent).size();
    if (s.alphabet < 1) throw usage_error("--codec enum requires --alphabet (or --parent)");
  } else {
    throw usage_error("--codec must be enum or huffman");
  }
  return s;
}

std::string stream_bytes(const Bitstream& b) {
  const auto bytes = b.serialize();
  return {bytes.begin(), bytes.end()};
}

Bitstream parse_stream(const std::string& raw) {
  std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
  return Bitstream::deserialize(bytes);
}

/// Letters are 1-based; the input may hold several blocks of n letters.
std::string cmd_encode(const Globals& g, const CodecArgs& a) {
  const auto s = codec_setup(a);
  const auto letters = parse_letters(read_input(g.in));
  if (letters.empty() || letters.size() % s.n != 0)
    throw usage_error("input holds " + std::to_string(letters.size()) + " letters, not a positive multiple of n=" +
                      std::to_string(s.n));
  Bitstream out;
  for (std::size_t b = 0; b < letters.size() / s.n; ++b) {
    std::span<const std::uint64_t> block(letters.data() + b * s.n, s.n);
    if (s.code) {
      out.append(encode_multiset(block, *s.code));
    } else {
      out.append(enum_encode(type_of(block, s.alphabet)));
    }
  }
  return stream_bytes(out);
}

std::string cmd_decode(const Globals& g, const CodecArgs& a) {
  const auto s = codec_setup(a);
  const auto bits = parse_stream(read_input(g.in));
  std::vector<TypeVector> types;
  if (s.code) {
    BitReader reader(bits);
    if (s.code->max_length() == 0) {
      for (std::uint64_t b = 0; b < a.blocks; ++b) types.push_back(type_unrank(0, s.n, s.alphabet));
    } else {
      while (!reader.at_end()) types.push_back(type_unrank(s.code->decode_one(reader), s.n, s.alphabet));
    }
  } else {
    const auto width = enum_code_length(s.n, s.alphabet);
    if (width == 0) {
      if (!bits.empty()) throw decode_error("decode: zero-width code but the stream is not empty");
      for (std::uint64_t b = 0; b < a.blocks; ++b) types.push_back(type_unrank(0, s.n, s.alphabet));
    } else {
      if (bits.empty() || bits.size() % width != 0)
        throw decode_error("decode: stream length " + std::to_string(bits.size()) +
                           " is not a positive multiple of the code width " + std::to_string(width));
      BitReader reader(bits);
      for (std::size_t b = 0; b < bits.size() / width; ++b) {
        Bitstream one;
        one.append_big(reader.read_big(width), width);
        types.push_back(enum_decode(one, s.n, s.alphabet));
      }
    }
  }
  if (want_json(g)) {
    json arr = json::array();
    for (const auto& t : types) arr.push_back(json_io::to_json(t));
    return dump(arr);
  }
  std::string text;
  for (const auto& t : types) {
    std::string line;
    for (std::size_t letter = 1; letter <= t.alphabet_size(); ++letter)
      for (std::uint64_t c = 0; c < t.count(letter); ++c) line += (line.empty() ? "" : " ") + std::to_string(letter);
    text += line + "\n";
  }
  return text;
}

std::string cmd_universal_encode(const Globals& g) {
  return stream_bytes(universal_encode(parse_letters(read_input(g.in))));
}

std::string cmd_universal_decode(const Globals& g) {
  const auto ms = universal_decode(parse_stream(read_input(g.in)));
  if (want_json(g)) return dump({{"multiset", ms}});
  std::string line;
  for (auto x : ms) line += (line.empty() ? "" : " ") + std::to_string(x);
  return line + "\n";
}

struct HistogramArgs {
  bool encode = false;
  bool decode = false;
  std::string bits;
};

std::string cmd_histogram(const Globals& g, const HistogramArgs& a) {
  if (a.encode == a.decode) throw usage_error("histogram needs exactly one of --encode or --decode");
  if (a.encode) {
    const auto counts = parse_letters(read_input(g.in));
    const auto bits = histogram_encode(counts).to_string();
    if (want_json(g)) return dump({{"bits", bits}});
    return bits + "\n";
  }
  std::string text = a.bits.empty() ? read_input(g.in) : a.bits;
  std::string clean;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
  const auto counts = histogram_decode(Bitstream::from_string(clean));
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (want_json(g)) return dump({{"counts", counts}, {"bins", counts.size()}, {"total", total}});
  std::string line;
  for (auto c : counts) line += (line.empty() ? "" : " ") + std::to_string(c);
  return line + "\n";
}

struct RedundancyArgs {
  std::size_t alphabet = 2;
  std::string grid = "2^8:2^16";
};

std::string cmd_redundancy(const Globals& g, const RedundancyArgs& a) {
  if (a.alphabet < 2) throw usage_error("--alphabet must be >= 2");
  if (a.alphabet > 3) throw usage_error("redundancy is computed for --alphabet 2 or 3");
  const auto grid = parse_grid(a.grid);
  Csv csv("n,H_types_bits,H_cond_bits,normalized_redundancy");
  json arr = json::array();
  for (auto n : grid) {
    if (n < 2) throw usage_error("redundancy: n must be >= 2");
    if (a.alphabet == 3 && n > 4096) throw usage_error("redundancy: n <= 4096 for --alphabet 3");
    const auto r = normalized_redundancy_empirical(a.alphabet, n);
    csv.row(n, r.h_types, r.h_cond, r.normalized);
    arr.push_back({{"n", n}, {"H_types_bits", r.h_types}, {"H_cond_bits", r.h_cond}, {"normalized_redundancy", r.normalized}});
  }
  return want_json(g) ? dump(arr) : csv.text;
}

struct OsZeroArgs {
  std::vector<std::string> parents;
  unsigned n_max = 128;
};

std::vector<ContinuousParent> fig_parents(const std::vector<std::string>& specs) {
  std::vector<ContinuousParent> out;
  for (const auto& s : specs) out.push_back(json_io::continuous_parent(s));
  if (out.empty())
    out = {ContinuousParent::uniform(-std::sqrt(3.0), std::sqrt(3.0)), ContinuousParent::gaussian(0.0, 1.0),
           ContinuousParent::exponential(1.0)};
  return out;
}

std::string cmd_oszero(const Globals& g, const OsZeroArgs& a) {
  if (a.n_max < 1 || a.n_max > 4096) throw usage_error("--n-max must lie in [1, 4096]");
  Csv csv("parent,n,D_n0");
  json arr = json::array();
  for (const auto& p : fig_parents(a.parents)) {
    const auto curve = zero_rate_distortion_curve(p, a.n_max);
    for (const auto& [n, d] : curve.points) {
      csv.row(curve.parent_label, n, d);
      arr.push_back({{"parent", curve.parent_label}, {"n", n}, {"D_n0", d}});
    }
  }
  return want_json(g) ? dump(arr) : csv.text;
}

struct OsEntropyArgs {
  std::string parent;
  unsigned K = 2;
};

std::string cmd_os_entropy(const Globals& g, const OsEntropyArgs& a) {
  if (a.parent.empty()) throw usage_error("--parent is required");
  if (a.K < 1 || a.K > 512) throw usage_error("--K must lie in [1, 512]");
  const auto p = json_io::continuous_parent(a.parent);
  Csv csv("quantity,r,bits");
  json arr = json::array();
  auto add = [&](const std::string& q, unsigned r, double v) {
    csv.row(q, r, v);
    arr.push_back({{"quantity", q}, {"r", r}, {"bits", v}});
  };
  add("parent", 0, p.differential_entropy());
  for (unsigned r = 1; r <= a.K; ++r) add("marginal", r, os_marginal_entropy({p, a.K, r}));
  add("average_marginal", 0, os_avg_marginal_entropy(p, a.K));
  add("joint", 0, os_joint_entropy(p, a.K));
  for (unsigned r = 1; r < a.K; ++r) add("conditional", r, os_conditional_entropy(p, a.K, r));
  return want_json(g) ? dump(arr) : csv.text;
}

struct QuantizeArgs {
  std::string parent;
  unsigned rate = 1;
  unsigned K = 1;
  std::string codebook;
  double step = 1.0 / 64;
  std::size_t letters = 1000000;
  std::size_t samples = 1000000;
};

std::string cmd_quantize_design(const Globals& g, const QuantizeArgs& a) {
  json j;
  if (a.K == 1) {
    if (a.parent.empty()) throw usage_error("--parent is required for K = 1");
    if (a.rate > 12) throw usage_error("--rate must be <= 12");
    const auto q = lloyd_max_1d(json_io::continuous_parent(a.parent), a.rate);
    j = json_io::to_json(q.codebook);
    j["distortion"] = {{"per_letter", q.distortion}, {"total", q.distortion}};
    j["thresholds"] = q.thresholds;
    j["iterations"] = q.iterations;
  } else if (a.K == 2) {
    if (!a.parent.empty()) {
      const auto p = json_io::continuous_parent(a.parent);
      const auto v = p.params();
      if (p.family() != Family::gaussian || v[0] != 0.0 || v[1] != 1.0)
        throw usage_error("K = 2 design is available for the standard Gaussian parent only");
    }
    if (a.rate > 3) throw usage_error("--rate must lie in {0,1,2,3} for K = 2");
    OSQuantizerOptions o;
    o.seed = {require_seed(g, "quantize design --K 2"), 0};
    o.samples = a.samples;
    const auto q = os_quantizer_2d_gaussian(a.rate, o);
    j = json_io::to_json(q.codebook);
    j["distortion"] = {{"per_letter", q.per_letter_distortion}, {"total", q.total_distortion},
                       {"sample_total", q.sample_distortion}};
    j["iterations"] = q.iterations;
  } else {
    throw usage_error("quantize design supports --K 1 or --K 2");
  }
  if (want_json(g)) return dump(j);
  Csv csv(a.K == 1 ? "index,x1" : "index,x1,x2");
  std::size_t i = 0;
  for (const auto& p : j.at("points")) {
    if (a.K == 1)
      csv.row(i++, p[0].get<double>());
    else
      csv.row(i++, p[0].get<double>(), p[1].get<double>());
  }
  return csv.text;
}

std::string cmd_quantize_apply(const Globals& g, const QuantizeArgs& a) {
  if (a.codebook.empty()) throw usage_error("--codebook is required");
  const auto cb = json_io::codebook_from_json(json_io::load(a.codebook));
  const auto xs = parse_numbers<double>(read_input(g.in), "input");
  if (xs.empty() || xs.size() % cb.K != 0)
    throw usage_error("input must hold a positive multiple of K=" + std::to_string(cb.K) + " values");
  std::string header = "block";
  for (unsigned j = 1; j <= cb.K; ++j) header += ",q" + std::to_string(j);
  Csv csv(header);
  json arr = json::array();
  for (std::size_t b = 0; b < xs.size() / cb.K; ++b) {
    const auto q = cb.quantize(std::span<const double>(xs.data() + b * cb.K, cb.K));
    csv.text += std::to_string(b);
    for (double v : q) csv.text += "," + fmt(v);
    csv.text += "\n";
    arr.push_back(q);
  }
  return want_json(g) ? dump(arr) : csv.text;
}

std::string cmd_quantize_ledger(const Globals& g, const QuantizeArgs& a) {
  if (a.K < 1 || a.K > 1000) throw usage_error("--K must lie in [1, 1000]");
  const auto L = scheme_ledger(a.K);
  Csv csv("K,scheme,description,rate_reduction_bits,distortion_factor");
  json arr = json::array();
  for (const auto& r : L.rows) {
    const std::string f = r.distortion_factor ? fmt(*r.distortion_factor) : "unavailable";
    csv.row(a.K, r.scheme, r.description, r.rate_reduction_bits, f);
    arr.push_back({{"K", a.K}, {"scheme", r.scheme}, {"description", r.description},
                   {"rate_reduction_bits", r.rate_reduction_bits},
                   {"distortion_factor", r.distortion_factor ? json(*r.distortion_factor) : json("unavailable")}});
  }
  return want_json(g) ? dump(arr) : csv.text;
}

std::string cmd_quantize_validate(const Globals& g, const QuantizeArgs& a) {
  if (a.parent.empty()) throw usage_error("--parent is required");
  if (a.K < 1 || a.K > 64) throw usage_error("--K must lie in [1, 64]");
  if (!(a.step > 0.0)) throw usage_error("--step must be positive");
  const auto r = high_rate_validate(json_io::continuous_parent(a.parent), a.K, a.step, a.letters,
                                    {require_seed(g, "quantize validate"), 0});
  Csv csv("K,step,scheme,rate_bits,predicted_rate_bits,mse,predicted_mse");
  json arr = json::array();
  for (const auto& s : r.schemes) {
    csv.row(a.K, a.step, s.scheme, s.rate_bits, s.predicted_rate, s.mse, r.predicted_mse);
    arr.push_back({{"K", a.K}, {"step", a.step}, {"scheme", s.scheme}, {"rate_bits", s.rate_bits},
                   {"predicted_rate_bits", s.predicted_rate}, {"mse", s.mse}, {"predicted_mse", r.predicted_mse}});
  }
  return want_json(g) ? dump(arr) : csv.text;
}

struct BoundsArgs {
  std::string curves = "slb,sub";
  std::string parent;
  std::size_t points = 1000;
  std::string scale = "total";
};

std::string cmd_bounds(const Globals& g, const BoundsArgs& a) {
  if (a.points < 2 || a.points > 1000000) throw usage_error("--points must lie in [2, 1e6]");
  DistortionScale scale;
  if (a.scale == "total")
    scale = DistortionScale::total;
  else if (a.scale == "per_letter")
    scale = DistortionScale::per_letter;
  else
    throw usage_error("--scale must be total or per_letter");
  std::vector<std::string> names;
  {
    std::stringstream ss(a.curves);
    std::string item;
    while (std::getline(ss, item, ',')) names.push_back(item);
  }
  std::vector<double> pmf{0.25, 0.5, 0.25};
  if (!a.parent.empty()) {
    const auto p = json_io::discrete_parent(a.parent);
    pmf.assign(p.probs().begin(), p.probs().end());
  }
  Csv csv("label,rate_bits,distortion");
  json arr = json::array();
  auto emit = [&](const RDCurve& c) {
    for (const auto& p : c.points) {
      csv.row(c.label, p.rate_bits, p.distortion);
      arr.push_back({{"label", c.label}, {"rate_bits", p.rate_bits}, {"distortion", p.distortion}});
    }
  };
  const double d_end = 2.0 - 2.0 / std::numbers::pi;
  const double d_max = scale == DistortionScale::total ? d_end : 0.5 * d_end;
  for (const auto& name : names) {
    RDCurve c;
    c.label = name;
    if (name == "slb" || name == "sub") {
      for (std::size_t i = 1; i <= a.points; ++i) {
        const double D = d_max * static_cast<double>(i) / a.points;
        const double R = name == "slb" ? slb_os_gaussian(D, scale) : sub_os_gaussian(D, scale);
        c.points.push_back({R, D});
      }
    } else if (name == "erokhin") {
      c = erokhin_rd(pmf, a.points);
    } else if (name == "ba") {
      std::vector<double> betas;
      for (std::size_t i = 0; i < a.points; ++i) betas.push_back(20.0 * static_cast<double>(i) / (a.points - 1));
      c = blahut_arimoto(pmf, hamming_matrix(pmf.size()), pmf.size(), betas);
    } else {
      throw usage_error("--curve entries must be slb, sub, erokhin or ba");
    }
    emit(c);
  }
  return want_json(g) ? dump(arr) : csv.text;
}

struct BudgetArgs {
  std::uint64_t N = 1;
  double R = 1.0;
  std::string grid = "2^4:2^20";
};

std::string cmd_budget(const Globals& g, const BudgetArgs& a) {
  Csv csv("n,N,R,budget_bits,ratio_to_log2_n");
  json arr = json::array();
  for (auto n : parse_grid(a.grid)) {
    std::uint64_t bits = 0;
    try {
      bits = lossy_logn_budget(n, a.N, a.R);
    } catch (const mslab::invalid_argument& e) {
      throw usage_error(e.what());
    }
    const double ratio = n > 1 ? bits / std::log2(static_cast<double>(n)) : 0.0;
    csv.row(n, a.N, a.R, bits, ratio);
    arr.push_back({{"n", n}, {"N", a.N}, {"R", a.R}, {"budget_bits", bits}, {"ratio_to_log2_n", ratio}});
  }
  return want_json(g) ? dump(arr) : csv.text;
}

struct TableArgs {
  std::string corpus;
  std::string grams = "1,2,3,4";
  bool counts = false;
  std::size_t n_max = 16;
  std::size_t k_max = 3;
  std::size_t alphabet = 2;
};

std::string cmd_table(const Globals& g, const TableArgs& a) {
  if (a.counts) {
    if (a.n_max < 1 || a.k_max < 1 || a.alphabet < 1) throw usage_error("--n-max, --k-max, --alphabet must be >= 1");
    Csv csv("n,k,distinct_kgram_multisets,log2_count,log2_markov_bound");
    json arr = json::array();
    for (std::size_t n = 1; n <= a.n_max; ++n)
      for (std::size_t k = 1; k <= std::min(a.k_max, n); ++k) {
        const auto c = distinct_kgram_multiset_count(n, a.alphabet, k);
        const double bound = log2_big(markov_type_count_bound(n, a.alphabet, static_cast<unsigned>(k)));
        csv.row(n, k, c, std::log2(static_cast<double>(c)), bound);
        arr.push_back({{"n", n}, {"k", k}, {"distinct_kgram_multisets", c},
                       {"log2_count", std::log2(static_cast<double>(c))}, {"log2_markov_bound", bound}});
      }
    return want_json(g) ? dump(arr) : csv.text;
  }
  if (a.corpus.empty()) throw usage_error("table needs --corpus FILE or --counts");
  std::ifstream in(a.corpus);
  if (!in) throw usage_error("cannot open corpus '" + a.corpus + "'");
  const auto corpus = parse_corpus(in);
  std::vector<std::size_t> grams;
  for (auto k : parse_grid(a.grams)) grams.push_back(static_cast<std::size_t>(k));
  const auto t = empirical_entropy_table(corpus, grams);
  Csv csv("representation,k,entropy_bits,bound_bits");
  json arr = json::array();
  for (const auto& r : t.rows) {
    csv.row(r.label, r.k, r.entropy_bits, r.bound_bits);
    arr.push_back({{"representation", r.label}, {"k", r.k}, {"entropy_bits", r.entropy_bits}, {"bound_bits", r.bound_bits}});
  }
  return want_json(g) ? dump(arr) : csv.text;
}

/// Writes atomically: a temporary sibling file is renamed over the target.
void emit(const Globals& g, const std::string& payload) {
  if (g.out.empty() || g.out == "-") {
    std::cout.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    std::cout.flush();
    return;
  }
  const std::string tmp = g.out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + g.out + "'");
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!f) throw std::runtime_error("cannot write '" + g.out + "'");
  }
  std::filesystem::rename(tmp, g.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mslab: source coding for multisets"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized commands");
  app.add_option("--out", g.out, "Output file (default: standard output)");
  app.add_option("--in", g.in, "Input file (default: standard input)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  TypeCountArgs tc;
  auto* s_tc = app.add_subcommand("type-count", "Number of types of size n");
  s_tc->add_option("--n", tc.n)->required();
  s_tc->add_option("--alphabet", tc.alphabet)->required();

  EntropyArgs en;
  auto* s_en = app.add_subcommand("entropy", "Multiset entropies");
  s_en->add_option("--mode", en.mode)->check(CLI::IsMember({"exact", "asymptotic", "decomposition"}));
  s_en->add_option("--n", en.n)->required();
  s_en->add_option("--parent", en.parent, "Discrete parent JSON (file or inline)");
  s_en->add_option("--p", en.p, "Bernoulli parameter for asymptotic mode");

  CodecArgs enc, dec;
  auto codec_opts = [](CLI::App* s, CodecArgs& c) {
    s->add_option("--codec", c.codec)->check(CLI::IsMember({"enum", "huffman"}));
    s->add_option("--n", c.n)->required();
    s->add_option("--alphabet", c.alphabet);
    s->add_option("--parent", c.parent);
  };
  auto* s_enc = app.add_subcommand("encode", "Encode multisets of 1-based letters");
  codec_opts(s_enc, enc);
  auto* s_dec = app.add_subcommand("decode", "Decode multisets");
  codec_opts(s_dec, dec);
  s_dec->add_option("--blocks", dec.blocks, "Block count for zero-width codes");

  auto* s_uenc = app.add_subcommand("universal-encode", "Universal code for a multiset of positive integers");
  auto* s_udec = app.add_subcommand("universal-decode", "Decode a universal code stream");

  HistogramArgs hi;
  auto* s_hi = app.add_subcommand("histogram", "Unary histogram code");
  s_hi->add_flag("--encode", hi.encode);
  s_hi->add_flag("--decode", hi.decode);
  s_hi->add_option("--bits", hi.bits, "Bit string to decode (default: input)");

  RedundancyArgs rd;
  auto* s_rd = app.add_subcommand("redundancy", "Log-blocklength normalized redundancy");
  s_rd->add_option("--alphabet", rd.alphabet);
  s_rd->add_option("--n-grid", rd.grid);

  OsZeroArgs oz;
  auto* s_oz = app.add_subcommand("oszero", "Zero-rate distortion of order statistics");
  s_oz->add_option("--parent", oz.parents, "Continuous parent JSON; repeatable");
  s_oz->add_option("--n-max", oz.n_max);

  OsEntropyArgs oe;
  auto* s_oe = app.add_subcommand("os-entropy", "Order-statistic differential entropies");
  s_oe->add_option("--parent", oe.parent)->required();
  s_oe->add_option("--K", oe.K);

  QuantizeArgs qd, qa, ql, qv;
  auto* s_q = app.add_subcommand("quantize", "Quantizer design and analysis");
  s_q->require_subcommand(1);
  auto* s_qd = s_q->add_subcommand("design", "Lloyd design");
  s_qd->add_option("--parent", qd.parent);
  s_qd->add_option("--rate", qd.rate);
  s_qd->add_option("--K", qd.K);
  s_qd->add_option("--samples", qd.samples);
  auto* s_qa = s_q->add_subcommand("apply", "Quantize blocks of K values");
  s_qa->add_option("--codebook", qa.codebook)->required();
  auto* s_ql = s_q->add_subcommand("ledger", "High-rate scheme ledger");
  s_ql->add_option("--K", ql.K);
  auto* s_qv = s_q->add_subcommand("validate", "Monte Carlo high-rate validation");
  s_qv->add_option("--parent", qv.parent)->required();
  s_qv->add_option("--K", qv.K);
  s_qv->add_option("--step", qv.step);
  s_qv->add_option("--letters", qv.letters);

  BoundsArgs bo;
  auto* s_bo = app.add_subcommand("bounds", "Rate-distortion curves and bounds");
  s_bo->add_option("--curve", bo.curves, "Comma list of slb, sub, erokhin, ba");
  s_bo->add_option("--parent", bo.parent, "Discrete pmf for erokhin/ba");
  s_bo->add_option("--points", bo.points);
  s_bo->add_option("--scale", bo.scale, "Distortion scale for slb/sub: total or per_letter");

  BudgetArgs bu;
  auto* s_bu = app.add_subcommand("budget", "Bits for the superletter multiset construction");
  s_bu->add_option("--N", bu.N);
  s_bu->add_option("--R", bu.R);
  s_bu->add_option("--n-grid", bu.grid);

  TableArgs ta;
  auto* s_ta = app.add_subcommand("table", "Entropy tables and k-gram multiset counts");
  s_ta->add_option("--corpus", ta.corpus);
  s_ta->add_option("--grams", ta.grams);
  s_ta->add_flag("--counts", ta.counts, "Emit distinct k-gram multiset counts instead");
  s_ta->add_option("--n-max", ta.n_max);
  s_ta->add_option("--k-max", ta.k_max);
  s_ta->add_option("--alphabet", ta.alphabet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    std::string payload;
    if (*s_tc) payload = cmd_type_count(g, tc);
    else if (*s_en) payload = cmd_entropy(g, en);
    else if (*s_enc) payload = cmd_encode(g, enc);
    else if (*s_dec) payload = cmd_decode(g, dec);
    else if (*s_uenc) payload = cmd_universal_encode(g);
    else if (*s_udec) payload = cmd_universal_decode(g);
    else if (*s_hi) payload = cmd_histogram(g, hi);
    else if (*s_rd) payload = cmd_redundancy(g, rd);
    else if (*s_oz) payload = cmd_oszero(g, oz);
    else if (*s_oe) payload = cmd_os_entropy(g, oe);
    else if (*s_qd) payload = cmd_quantize_design(g, qd);
    else if (*s_qa) payload = cmd_quantize_apply(g, qa);
    else if (*s_ql) payload = cmd_quantize_ledger(g, ql);
    else if (*s_qv) payload = cmd_quantize_validate(g, qv);
    else if (*s_bo) payload = cmd_bounds(g, bo);
    else if (*s_bu) payload = cmd_budget(g, bu);
    else if (*s_ta) payload = cmd_table(g, ta);
    emit(g, payload);
    return 0;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const mslab::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
