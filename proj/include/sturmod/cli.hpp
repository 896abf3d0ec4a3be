// Command-line front end. run() is the whole program minus process plumbing,
// so tests can drive it with argument vectors and string streams.
//
// Exit codes: 0 success, 1 a verification check failed, 2 usage or parse
// error, 3 inconclusive result (0 with --allow-inconclusive).
#pragma once

#include "sturmod/exact.hpp"
#include "sturmod/orbits.hpp"
#include "sturmod/series.hpp"
#include "sturmod/sturmian.hpp"
#include "sturmod/verify.hpp"
#include "sturmod/wordspec.hpp"
#include "sturmod/words.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace sturmod::cli {

enum class Format { pretty, jsonl, csv };

inline constexpr const char* kVersion = "0.1.0";
/// CSV column layouts are versioned; bump when columns change.
inline constexpr int kCsvVersion = 1;

struct Config {
  unsigned bits = 64;
  std::size_t n = 1000;
  Format format = Format::pretty;
  std::uint64_t seed = 1;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Format parse_format(const std::string& s) {
  if (s == "pretty") return Format::pretty;
  if (s == "jsonl") return Format::jsonl;
  if (s == "csv") return Format::csv;
  throw UsageError("unknown format '" + s + "' (pretty, jsonl, csv)");
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline unsigned long parse_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(value, &used);
    if (used != value.size() || value.front() == '-') throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects a non-negative integer, got '" + value + "'");
  }
}

inline void validate(const Config& c) {
  if (c.bits < 16) throw UsageError("bits must be at least 16");
  if (c.n < 1) throw UsageError("n must be at least 1");
}

/// key=value lines; '#' starts a comment. Keys: bits, n, format, seed.
inline Config load_config(std::istream& in, Config base = {}) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "bits") {
      base.bits = static_cast<unsigned>(parse_count(key, value));
    } else if (key == "n") {
      base.n = parse_count(key, value);
    } else if (key == "format") {
      base.format = parse_format(value);
    } else if (key == "seed") {
      base.seed = parse_count(key, value);
    } else {
      throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  validate(base);
  return base;
}

inline std::optional<std::string> env_config_path() {
  const char* p = std::getenv("STURMOD_CONFIG");
  if (!p || !*p) return std::nullopt;
  return std::string(p);
}

// --------------------------------------------------------------------------
// Parameter lists for verify: key=value pairs split at top-level commas.

class Params {
 public:
  explicit Params(const std::string& text) {
    int depth = 0;
    std::string cur;
    auto flush = [&] {
      const std::string item = trim(cur);
      cur.clear();
      if (item.empty()) return;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("--params: expected key=value, got '" + item + "'");
      values_[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    };
    for (char c : text) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        flush();
      } else {
        cur += c;
      }
    }
    flush();
  }

  std::optional<std::string> take(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  /// Rejects keys nobody asked for.
  void finish(const std::string& suite) const {
    if (!values_.empty()) throw UsageError("unknown parameter '" + values_.begin()->first + "' for suite " + suite);
  }

 private:
  std::map<std::string, std::string> values_;
};

inline QuadraticReal default_theta() { return parse_quadratic("(3-sqrt(5))/2"); }

/// Shorthands relative to theta (c, Dc, 011Dc, 100Dc, 0c, 1c) or a full spec.
inline WordStream resolve_word(const std::string& text, const QuadraticReal& theta) {
  if (text == "c") return characteristic(theta);
  if (text == "Dc") return doubled(characteristic(theta));
  if (text == "011Dc") return c_representative(CVariant::e011, theta);
  if (text == "100Dc") return c_representative(CVariant::e100, theta);
  if (text == "0c") return mechanical({theta, -theta, Rounding::floor});
  if (text == "1c") return mechanical({theta, -theta, Rounding::ceil});
  return parse_word_spec(text);
}

// --------------------------------------------------------------------------
// Output

using Json = nlohmann::ordered_json;

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out;
}

inline Json enclosure_json(const RealEnclosure& e, int digits = 30) {
  const DecimalRendering d = to_decimal(e, digits);
  return Json{{"lo", rational_to_string(e.lo)},
              {"hi", rational_to_string(e.hi)},
              {"decimal", d.text},
              {"certified_digits", d.certified_digits}};
}

inline std::string enclosure_pretty(const RealEnclosure& e, int digits = 30) {
  const DecimalRendering d = to_decimal(e, digits);
  return d.text + "  (" + std::to_string(d.certified_digits) + " certified digits; lo " + rational_to_string(e.lo) +
         ", hi " + rational_to_string(e.hi) + ")";
}

inline void emit_report(const VerdictReport& rep, Format format, std::ostream& out) {
  switch (format) {
    case Format::jsonl: {
      Json params = Json::object();
      for (const auto& [k, v] : rep.params) params[k] = v;
      for (const auto& c : rep.checks) {
        Json data = Json::object();
        for (const auto& [k, v] : c.data) data[k] = v;
        out << Json{{"suite", rep.suite}, {"id", c.id},          {"status", to_string(c.status)},
                    {"claim", c.claim},   {"witness", c.witness}, {"data", data}}
                   .dump()
            << '\n';
      }
      out << Json{{"suite", rep.suite},
                  {"params", params},
                  {"summary", {{"pass", rep.count(Status::pass)},
                               {"fail", rep.count(Status::fail)},
                               {"inconclusive", rep.count(Status::inconclusive)}}}}
                 .dump()
          << '\n';
      break;
    }
    case Format::csv: {
      out << csv_row({"suite", "id", "status", "claim", "witness", "data"}) << '\n';
      for (const auto& c : rep.checks) {
        std::string data;
        for (const auto& [k, v] : c.data) data += (data.empty() ? "" : ";") + k + "=" + v;
        out << csv_row({rep.suite, c.id, to_string(c.status), c.claim, c.witness, data}) << '\n';
      }
      break;
    }
    case Format::pretty: {
      out << "suite " << rep.suite;
      for (const auto& [k, v] : rep.params) out << "  " << k << "=" << v;
      out << '\n';
      for (const auto& c : rep.checks) {
        out << "  [" << to_string(c.status) << "] " << c.id << ": " << c.claim << '\n';
        if (!c.witness.empty()) out << "      witness: " << c.witness << '\n';
        for (const auto& [k, v] : c.data) out << "      " << k << " = " << v << '\n';
      }
      out << "result: " << rep.count(Status::pass) << " pass, " << rep.count(Status::fail) << " fail, "
          << rep.count(Status::inconclusive) << " inconclusive\n";
      break;
    }
  }
}

inline int report_exit_code(const VerdictReport& rep, bool allow_inconclusive) {
  if (rep.count(Status::fail)) return 1;
  if (rep.count(Status::inconclusive) && !allow_inconclusive) return 3;
  return 0;
}

// --------------------------------------------------------------------------
// Suites from parameter lists

inline Rational positive_ratio(Params& p, const std::string& suite) {
  const auto r = p.take("r");
  const auto b = p.take("b");
  if (r && b) throw UsageError("suite " + suite + ": give r or b, not both");
  if (b) {
    const long base = static_cast<long>(parse_count("b", *b));
    if (base < 2) throw UsageError("b must be at least 2");
    return Rational(1, base);
  }
  const Rational x = r ? parse_rational(*r) : Rational(1, 2);
  if (x <= 0 || x >= 1) throw UsageError("r must satisfy 0 < r < 1");
  return x;
}

inline VerdictReport run_suite(const std::string& suite, Params p, const Config& cfg) {
  auto theta_of = [&] {
    const auto t = p.take("theta");
    return t ? parse_quadratic(*t) : default_theta();
  };
  auto count_of = [&](const std::string& key, std::size_t dflt) {
    const auto v = p.take(key);
    return v ? parse_count(key, *v) : dflt;
  };
  VerdictReport rep;
  if (suite == "negative" || suite == "positive") {
    const bool neg = suite == "negative";
    const Rational r = positive_ratio(p, suite);
    const auto g = p.take("g");
    const QuadraticReal theta = theta_of();
    const std::string wtext = p.take("w").value_or(neg ? "Dc" : "c");
    const auto eta = p.take("eta");
    p.finish(suite);
    OrbitSpec spec{r, neg ? BaseSign::negative : BaseSign::positive, g ? Integer(*g) : Integer(0), resolve_word(wtext, theta)};
    ScanOptions opt;
    opt.theta = theta;
    if (eta) opt.eta = parse_rational(*eta);
    rep = neg ? suite_negative(spec, cfg.n, cfg.bits, opt) : suite_positive(spec, cfg.n, cfg.bits, opt);
  } else if (suite == "extremal") {
    const QuadraticReal theta = theta_of();
    const std::string order = p.take("order").value_or("alt");
    if (order != "alt" && order != "lex") throw UsageError("order must be alt or lex");
    const std::string wtext = p.take("w").value_or(order == "alt" ? "Dc" : "c");
    const std::size_t horizon = count_of("horizon", 0);
    p.finish(suite);
    rep = suite_extremal(resolve_word(wtext, theta), order == "alt" ? BaseSign::negative : BaseSign::positive, cfg.n,
                         theta, horizon);
  } else if (suite == "oracle") {
    const std::size_t L = count_of("L", 12);
    const Rational r = positive_ratio(p, suite);
    p.finish(suite);
    if (L < 1 || L > 22) throw UsageError("L must satisfy 1 <= L <= 22");
    rep = oracle_enumerate(L, r);
  } else if (suite == "monotone") {
    const auto rt = p.take("r");
    const Rational r = rt ? parse_rational(*rt) : Rational(2, 5);
    const std::size_t pairs = count_of("pairs", 10000);
    p.finish(suite);
    if (r <= 0 || r * 2 >= 1) throw UsageError("monotone needs 0 < r < 1/2");
    rep = monotone_suite(r, pairs, cfg.seed);
  } else if (suite == "dubickas") {
    const long b = static_cast<long>(count_of("b", 2));
    p.finish(suite);
    if (b < 2) throw UsageError("b must be at least 2");
    rep = dubickas_intervals(b, cfg.bits);
  } else if (suite == "identities") {
    const std::size_t instances = count_of("instances", 100);
    p.finish(suite);
    rep = suite_identities(instances, cfg.seed, cfg.bits);
  } else if (suite == "generators") {
    const std::size_t letters = count_of("letters", 10000);
    p.finish(suite);
    rep = suite_generators(letters);
  } else if (suite == "combinatorics") {
    const std::size_t K = count_of("K", 2000);
    const std::size_t L = count_of("L", 16);
    p.finish(suite);
    if (L < 1 || L > 24) throw UsageError("L must satisfy 1 <= L <= 24");
    rep = suite_combinatorics(K, L);
  } else if (suite == "digits") {
    p.finish(suite);
    rep = suite_digits(cfg.n);
  } else {
    throw UsageError("unknown suite '" + suite +
                     "' (negative, positive, extremal, oracle, monotone, dubickas, identities, generators, "
                     "combinatorics, digits)");
  }
  rep.params.push_back({"seed", std::to_string(cfg.seed)});
  return rep;
}

// --------------------------------------------------------------------------
// Subcommands

struct Options {
  std::string config_path;
  std::string format;
  unsigned bits = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool allow_inconclusive = false;
  std::string spec;
  std::string ratio;
  long b = 0;
  std::string sign = "negative";
  std::string g = "0";
  std::string theta;
  std::string eta;
  std::string target = "all";
  std::string suite;
  std::string params;
  std::size_t L = 12;
};

inline int cmd_gen(const Options& o, const Config& cfg, std::ostream& out) {
  const WordStream w = parse_word_spec(o.spec);
  const std::string word = w.prefix(cfg.n).to_string();
  switch (cfg.format) {
    case Format::pretty:
      out << word << '\n';
      break;
    case Format::jsonl:
      out << Json{{"spec", o.spec}, {"describe", w.describe()}, {"n", cfg.n}, {"word", word}}.dump() << '\n';
      break;
    case Format::csv:
      out << csv_row({"spec", "n", "word"}) << '\n' << csv_row({o.spec, std::to_string(cfg.n), word}) << '\n';
      break;
  }
  return 0;
}

inline int cmd_classify(const Options& o, const Config& cfg, std::ostream& out) {
  const WordStream w = parse_word_spec(o.spec);
  std::vector<std::pair<std::string, ClassTarget>> targets;
  if (o.target == "all" || o.target == "sturmian") targets.push_back({"sturmian", ClassTarget::sturmian});
  if (o.target == "all" || o.target == "S") targets.push_back({"S", ClassTarget::s_class});
  if (o.target == "all" || o.target == "D") targets.push_back({"D", ClassTarget::d_class});
  if (targets.empty()) throw UsageError("target must be sturmian, S, D or all");
  if (cfg.format == Format::csv) out << csv_row({"target", "verdict", "length", "witness", "notes"}) << '\n';
  for (const auto& [name, t] : targets) {
    const ClassVerdict v = classify(w, t, cfg.n);
    std::string notes;
    for (const auto& s : v.notes) notes += (notes.empty() ? "" : "; ") + s;
    // an empty witness is meaningful (0u0 and 1u1 with u empty), so spell it out
    const std::string witness = !v.witness ? "" : v.witness->empty() ? "(empty word)" : v.witness->to_string();
    switch (cfg.format) {
      case Format::pretty:
        out << name << ": " << to_string(v.kind) << " (length " << v.length << ")";
        if (v.witness) out << " witness " << witness;
        if (!notes.empty()) out << " [" << notes << "]";
        out << '\n';
        break;
      case Format::jsonl:
        out << Json{{"target", name}, {"verdict", to_string(v.kind)}, {"length", v.length}, {"witness", v.witness ? Json(v.witness->to_string()) : Json(nullptr)}, {"notes", v.notes}}
                   .dump()
            << '\n';
        break;
      case Format::csv:
        out << csv_row({name, to_string(v.kind), std::to_string(v.length), witness, notes}) << '\n';
        break;
    }
  }
  if (o.target == "all") {
    const ClassInfo info = class_info(w);
    if (cfg.format == Format::pretty) {
      out << "construction: " << (info.form ? describe(*info.form) : "not structural");
      if (info.form && info.form->cls == WordClass::d_class) {
        out << ", in C: " << (alt_endpoint_hits(*info.form).empty() ? "no" : "yes");
      }
      out << '\n';
    }
  }
  return 0;
}

inline int cmd_eval(const Options& o, const Config& cfg, std::ostream& out) {
  if (o.ratio.empty()) throw UsageError("eval needs --ratio");
  const Rational r = parse_rational(o.ratio);
  require_ratio(r);
  const WordStream w = parse_word_spec(o.spec);
  const RealEnclosure e = eval_t_bits(r, w, cfg.bits);
  switch (cfg.format) {
    case Format::pretty:
      out << "t_" << rational_to_string(r) << "(" << w.describe() << ") = " << enclosure_pretty(e) << '\n';
      break;
    case Format::jsonl: {
      Json j{{"ratio", rational_to_string(r)}, {"spec", o.spec}, {"bits", cfg.bits}};
      j["value"] = enclosure_json(e);
      out << j.dump() << '\n';
      break;
    }
    case Format::csv: {
      const DecimalRendering d = to_decimal(e, 30);
      out << csv_row({"ratio", "spec", "bits", "lo", "hi", "decimal", "certified_digits"}) << '\n'
          << csv_row({rational_to_string(r), o.spec, std::to_string(cfg.bits), rational_to_string(e.lo),
                      rational_to_string(e.hi), d.text, std::to_string(d.certified_digits)})
          << '\n';
      break;
    }
  }
  return 0;
}

inline BaseSign parse_sign(const std::string& s) {
  if (s == "negative" || s == "neg") return BaseSign::negative;
  if (s == "positive" || s == "pos") return BaseSign::positive;
  throw UsageError("sign must be negative or positive");
}

inline Rational ratio_from(const Options& o) {
  if (!o.ratio.empty() && o.b) throw UsageError("give --ratio or --b, not both");
  if (o.b) {
    if (o.b < 2) throw UsageError("--b must be at least 2");
    return Rational(1, o.b);
  }
  const Rational r = o.ratio.empty() ? Rational(1, 2) : parse_rational(o.ratio);
  if (r <= 0 || r >= 1) throw UsageError("--ratio must satisfy 0 < r < 1 (the sign is chosen by --sign)");
  return r;
}

inline int cmd_orbit(const Options& o, const Config& cfg, std::ostream& out) {
  const OrbitSpec spec{ratio_from(o), parse_sign(o.sign), Integer(o.g), parse_word_spec(o.spec)};
  ScanOptions opt;
  if (!o.theta.empty()) opt.theta = parse_quadratic(o.theta);
  if (!o.eta.empty()) opt.eta = parse_rational(o.eta);
  const OrbitScan scan = scan_orbit(spec, cfg.n, cfg.bits, opt);
  const ContainmentReport& rep = scan.report;
  if (cfg.format == Format::csv) {
    out << csv_row({"n", "frac_lo", "frac_hi", "decimal", "certified_digits", "wrap_ambiguous", "placement", "resolved_by"})
        << '\n';
  }
  for (std::size_t i = 0; i < scan.records.size(); ++i) {
    const OrbitRecord& rec = scan.records[i];
    const PlacedRecord& pl = rep.placed[i];
    const RealEnclosure shown = pl.y.value_or(rec.frac);
    const DecimalRendering d = to_decimal(rec.frac, 20);
    switch (cfg.format) {
      case Format::pretty:
        out << rec.n << "  " << (rec.wrap_ambiguous ? "?" : d.text) << "  " << to_string(pl.placement);
        if (pl.resolved_by != "enclosure") out << " (" << pl.resolved_by << ")";
        out << '\n';
        break;
      case Format::jsonl: {
        Json j{{"n", rec.n}};
        j["frac"] = enclosure_json(rec.frac, 20);
        j["lifted"] = enclosure_json(shown, 20);
        j["wrap_ambiguous"] = rec.wrap_ambiguous;
        j["placement"] = to_string(pl.placement);
        j["resolved_by"] = pl.resolved_by;
        j["bits"] = pl.bits;
        out << j.dump() << '\n';
        break;
      }
      case Format::csv:
        out << csv_row({std::to_string(rec.n), rational_to_string(rec.frac.lo), rational_to_string(rec.frac.hi), d.text,
                        std::to_string(d.certified_digits), rec.wrap_ambiguous ? "1" : "0", to_string(pl.placement),
                        pl.resolved_by})
            << '\n';
        break;
    }
  }
  auto list = [](const std::vector<std::size_t>& xs) { return detail::join(xs, 20); };
  switch (cfg.format) {
    case Format::pretty:
      out << "summary: records " << rep.count << ", violations " << rep.violations.size() << ", inconclusive "
          << rep.inconclusive.size() << ", lower attained {" << list(rep.lower_attained) << "}, upper attained {"
          << list(rep.upper_attained) << "}\n"
          << "  interval [" << enclosure_pretty(scan.ends.lower, 20) << ", " << enclosure_pretty(scan.ends.upper, 20)
          << "] mod 1, length " << rational_to_string(scan.ends.gap) << "\n"
          << "  eta " << rational_to_string(rep.eta) << ", empirical width >= " << to_decimal(RealEnclosure::exact(rep.width_lower_bound), 20).text
          << '\n';
      break;
    case Format::jsonl: {
      Json s{{"records", rep.count},
             {"violations", rep.violations},
             {"inconclusive", rep.inconclusive},
             {"lower_attained", rep.lower_attained},
             {"upper_attained", rep.upper_attained},
             {"eta", rational_to_string(rep.eta)},
             {"width_lower_bound", rational_to_string(rep.width_lower_bound)},
             {"gap", rational_to_string(scan.ends.gap)}};
      s["lower"] = enclosure_json(scan.ends.lower, 20);
      s["upper"] = enclosure_json(scan.ends.upper, 20);
      out << Json{{"summary", s}}.dump() << '\n';
      break;
    }
    case Format::csv:
      break;
  }
  if (!rep.violations.empty()) return 1;
  if (!rep.inconclusive.empty()) return o.allow_inconclusive ? 0 : 3;
  return 0;
}

inline int cmd_endpoints(const Options& o, const Config& cfg, std::ostream& out) {
  const QuadraticReal theta = o.theta.empty() ? default_theta() : parse_quadratic(o.theta);
  const OrbitSpec spec{ratio_from(o), parse_sign(o.sign), Integer(o.g), constant_word(0)};
  const Endpoints e = endpoints(spec, theta, cfg.bits);
  switch (cfg.format) {
    case Format::pretty:
      out << "theta " << theta.to_string() << "\n"
          << "lower " << enclosure_pretty(e.lower) << "  word " << e.lower_word.describe() << "\n"
          << "upper " << enclosure_pretty(e.upper) << "  word " << e.upper_word.describe() << "\n"
          << "gap   " << rational_to_string(e.gap) << "\n";
      break;
    case Format::jsonl: {
      Json j{{"theta", theta.to_string()}};
      j["lower"] = enclosure_json(e.lower);
      j["upper"] = enclosure_json(e.upper);
      j["gap"] = rational_to_string(e.gap);
      j["lower_word"] = e.lower_word.describe();
      j["upper_word"] = e.upper_word.describe();
      out << j.dump() << '\n';
      break;
    }
    case Format::csv:
      out << csv_row({"which", "lo", "hi", "decimal", "word"}) << '\n';
      for (const auto& [name, enc, w] : {std::tuple{"lower", e.lower, e.lower_word}, std::tuple{"upper", e.upper, e.upper_word}}) {
        out << csv_row({name, rational_to_string(enc.lo), rational_to_string(enc.hi), to_decimal(enc, 30).text, w.describe()})
            << '\n';
      }
      break;
  }
  return 0;
}

inline int cmd_constants(const Options& o, const Config& cfg, std::ostream& out) {
  const long b = o.b ? o.b : 2;
  if (b < 2) throw UsageError("--b must be at least 2");
  const DubickasConstants k = dubickas_constants(b, cfg.bits);
  const std::vector<std::pair<std::string, RealEnclosure>> rows{{"P", k.P}, {"A", k.A}, {"A'", k.A_prime}, {"B", k.B}};
  if (cfg.format == Format::csv) out << csv_row({"b", "name", "lo", "hi", "decimal", "certified_digits"}) << '\n';
  for (const auto& [name, e] : rows) {
    const DecimalRendering d = to_decimal(e, 30);
    switch (cfg.format) {
      case Format::pretty:
        out << name << " = " << d.text << "  (" << d.certified_digits << " certified digits)\n";
        break;
      case Format::jsonl: {
        Json j{{"b", b}, {"name", name}};
        j["value"] = enclosure_json(e);
        out << j.dump() << '\n';
        break;
      }
      case Format::csv:
        out << csv_row({std::to_string(b), name, rational_to_string(e.lo), rational_to_string(e.hi), d.text,
                        std::to_string(d.certified_digits)})
            << '\n';
        break;
    }
  }
  return 0;
}

/// Runs the program on `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::optional<std::string> config_from_env = env_config_path()) {
  CLI::App app{"Sturmian orbits and certified series evaluation", "sturmod"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "key=value config file (default: $STURMOD_CONFIG)");
  auto* fmt = app.add_option("--format", o.format, "pretty, jsonl or csv");
  auto* bits = app.add_option("--bits", o.bits, "enclosure precision in bits");
  auto* nopt = app.add_option("--n", o.n, "prefix length or orbit horizon");
  auto* seed = app.add_option("--seed", o.seed, "seed for randomized suites");
  fmt->check(CLI::IsMember({"pretty", "jsonl", "csv"}));
  for (auto* opt : {fmt, bits, nopt, seed}) opt->configurable(false);
  app.set_help_flag("-h,--help", "show help");
  app.set_version_flag("--version", std::string("sturmod ") + kVersion + " (csv layout " + std::to_string(kCsvVersion) + ")");

  auto* gen = app.add_subcommand("gen", "print a word prefix");
  gen->add_option("--spec", o.spec, "word spec")->required();
  auto* cls = app.add_subcommand("classify", "classify a word prefix");
  cls->add_option("--spec", o.spec, "word spec")->required();
  cls->add_option("--target", o.target, "sturmian, S, D or all");
  auto* ev = app.add_subcommand("eval", "certified t_r(w)");
  ev->add_option("--ratio", o.ratio, "ratio r with |r| < 1")->required();
  ev->add_option("--spec", o.spec, "word spec")->required();
  auto* orb = app.add_subcommand("orbit", "fractional parts of the shifted series");
  orb->add_option("--spec", o.spec, "word spec")->required();
  auto* end = app.add_subcommand("endpoints", "extremal values for a slope");
  for (auto* sub : {orb, end}) {
    sub->add_option("--ratio", o.ratio, "r in (0, 1)");
    sub->add_option("--b", o.b, "base b, r = 1/b");
    sub->add_option("--sign", o.sign, "negative or positive");
    sub->add_option("--g", o.g, "integer offset g");
    sub->add_option("--theta", o.theta, "slope");
  }
  orb->add_option("--eta", o.eta, "cut point of the circle");
  orb->add_flag("--allow-inconclusive", o.allow_inconclusive, "exit 0 on inconclusive touches");
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("--suite", o.suite, "suite name")->required();
  ver->add_option("--params", o.params, "key=value,... parameters");
  ver->add_flag("--allow-inconclusive", o.allow_inconclusive, "exit 0 on inconclusive checks");
  auto* ora = app.add_subcommand("oracle", "exhaustive enumeration of short words");
  ora->add_option("--L", o.L, "word length (at most 22)");
  ora->add_option("--ratio", o.ratio, "r in (0, 1)");
  auto* con = app.add_subcommand("constants", "constants of the excluded arcs");
  con->add_option("--b", o.b, "base b");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    Config cfg;
    const std::string path = !o.config_path.empty() ? o.config_path : config_from_env.value_or("");
    if (!path.empty()) {
      std::ifstream in(path);
      if (!in) throw UsageError("cannot read config file '" + path + "'");
      cfg = load_config(in);
    }
    if (!o.format.empty()) cfg.format = parse_format(o.format);
    if (bits->count()) cfg.bits = o.bits;
    if (nopt->count()) cfg.n = o.n;
    if (seed->count()) cfg.seed = o.seed;
    validate(cfg);

    if (gen->parsed()) return cmd_gen(o, cfg, out);
    if (cls->parsed()) return cmd_classify(o, cfg, out);
    if (ev->parsed()) return cmd_eval(o, cfg, out);
    if (orb->parsed()) return cmd_orbit(o, cfg, out);
    if (end->parsed()) return cmd_endpoints(o, cfg, out);
    if (con->parsed()) return cmd_constants(o, cfg, out);
    VerdictReport rep;
    if (ver->parsed()) {
      rep = run_suite(o.suite, Params(o.params), cfg);
    } else {
      const Rational r = o.ratio.empty() ? Rational(1, 2) : parse_rational(o.ratio);
      if (o.L < 1 || o.L > 22) throw UsageError("--L must satisfy 1 <= L <= 22");
      rep = oracle_enumerate(o.L, r);
    }
    emit_report(rep, cfg.format, out);
    return report_exit_code(rep, o.allow_inconclusive);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InconclusiveError& e) {
    err << "inconclusive: " << e.what() << '\n';
    return o.allow_inconclusive ? 0 : 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sturmod::cli
