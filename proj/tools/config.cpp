#include <cmath>
#include <limits>
#include <set>

#include "cli.hpp"
#include "symdyn/error.hpp"
#include "symdyn/models.hpp"

namespace symdyn::cli {

std::string format_diagnostic(const Diagnostic& d) {
  return std::string(d.error ? "error" : "warning") + ": " + (d.field.empty() ? "" : d.field + ": ") + d.message;
}

std::optional<json> parse_config(const std::string& text, std::vector<Diagnostic>& diags) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    diags.push_back({true, "line " + std::to_string(line) + ", column " + std::to_string(col), e.what()});
    return std::nullopt;
  }
}

namespace {

std::vector<std::string> string_list(const json& j) { return j.get<std::vector<std::string>>(); }

Alphabet alphabet_of(const json& spec) { return Alphabet(string_list(spec.at("alphabet"))); }

std::vector<Word> words_of(const json& j, const Alphabet& a) {
  std::vector<Word> out;
  for (const auto& s : j) out.push_back(a.parse(s.get<std::string>()));
  return out;
}

Rational parse_rational(const json& j) {
  if (j.is_number_integer()) return {j.get<long long>(), 1};
  const std::string s = j.get<std::string>();
  auto slash = s.find('/');
  if (slash == std::string::npos) return {std::stoll(s), 1};
  return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
}

}  // namespace

OraclePtr build_shift(const json& spec, const OracleOptions& base_options) {
  OracleOptions options = base_options;
  if (spec.contains("certificate_depth")) options.certificate_depth = spec.at("certificate_depth").get<std::size_t>();
  const std::string type = spec.at("type").get<std::string>();
  if (type == "sft") {
    Alphabet a = alphabet_of(spec);
    std::vector<Word> forbidden = spec.contains("forbidden") ? words_of(spec.at("forbidden"), a) : std::vector<Word>{};
    return sft_from_forbidden({a, forbidden}, options);
  }
  if (type == "cycle_sft") return cycle_sft(spec.at("k").get<std::size_t>(), options);
  if (type == "beta") {
    BetaSpec b;
    if (spec.contains("beta")) b.beta = spec.at("beta").get<double>();
    if (spec.contains("tolerance")) b.tolerance = spec.at("tolerance").get<double>();
    auto digits = [](const std::string& s) {
      Word w;
      for (char ch : s) {
        if (ch < '0' || ch > '9') throw Error(ErrorKind::invalid_argument, "driving sequence digits must be 0-9");
        w.push_back(static_cast<Symbol>(ch - '0'));
      }
      return w;
    };
    if (spec.contains("preperiod")) b.preperiod = digits(spec.at("preperiod").get<std::string>());
    if (spec.contains("period")) b.period = digits(spec.at("period").get<std::string>());
    return beta_shift(b, options);
  }
  if (type == "s_gap") {
    SGapSpec s;
    if (spec.contains("S")) s.S = spec.at("S").get<std::vector<std::size_t>>();
    if (spec.contains("cofinite_from")) s.cofinite_from = spec.at("cofinite_from").get<std::size_t>();
    return s_gap_shift(s, options);
  }
  if (type == "coded") {
    Alphabet a = alphabet_of(spec);
    CodedSpec c{a, words_of(spec.at("generators"), a), spec.value("truncated", false)};
    return coded_shift(c, options);
  }
  if (type == "cocyclic") {
    CocyclicSpec c{alphabet_of(spec), {}};
    for (const auto& m : spec.at("matrices")) {
      RationalMatrix rm;
      for (const auto& row : m) {
        std::vector<Rational> r;
        for (const auto& x : row) r.push_back(parse_rational(x));
        rm.push_back(r);
      }
      c.matrices.push_back(rm);
    }
    return cocyclic_shift(c, options);
  }
  if (type == "factor") {
    OraclePtr source = build_shift(spec.at("source"), base_options);
    BlockCode code;
    code.radius = spec.at("radius").get<std::size_t>();
    code.target = alphabet_of(spec);
    std::size_t width = 2 * code.radius + 1, size = 1;
    for (std::size_t i = 0; i < width; ++i) size *= source->k();
    code.table.assign(size, BlockCode::kUndefined);
    for (auto it = spec.at("table").begin(); it != spec.at("table").end(); ++it) {
      Word w = source->alphabet().parse(it.key());
      if (w.size() != width) throw Error(ErrorKind::invalid_argument, "window '" + it.key() + "' has the wrong length");
      std::size_t codev = 0;
      for (Symbol x : w) codev = codev * source->k() + x;
      Word t = code.target.parse(it.value().get<std::string>());
      if (t.size() != 1) throw Error(ErrorKind::invalid_argument, "image of '" + it.key() + "' must be one symbol");
      code.table[codev] = t[0];
    }
    return sliding_block_factor(source, code, options);
  }
  throw Error(ErrorKind::invalid_argument, "unknown shift type '" + type + "'");
}

Potential build_potential(const json& spec, const LanguageOracle& oracle) {
  const std::size_t k = oracle.k();
  if (spec.is_string()) {
    if (spec.get<std::string>() != "zero") throw Error(ErrorKind::invalid_argument, "potential must be \"zero\" or a table");
    return Potential::zero(k);
  }
  const std::size_t r = spec.at("range").get<std::size_t>();
  std::size_t size = 1;
  for (std::size_t i = 0; i < r; ++i) size *= k;
  std::vector<double> values(size, spec.contains("default") ? spec.at("default").get<double>()
                                                             : std::numeric_limits<double>::quiet_NaN());
  if (spec.contains("table"))
    for (auto it = spec.at("table").begin(); it != spec.at("table").end(); ++it) {
      Word w = oracle.alphabet().parse(it.key());
      if (w.size() != r) throw Error(ErrorKind::invalid_argument, "window '" + it.key() + "' must have length " + std::to_string(r));
      std::size_t code = 0;
      for (Symbol a : w) code = code * k + a;
      values[code] = it.value().get<double>();
    }
  Potential phi(k, r, values);
  phi.check_total(oracle);
  return phi;
}

// ---- validation ----

namespace {

enum class Kind { integer, number, boolean, word, words, set, shift, string, int_list, object };

struct Param {
  const char* name;
  Kind kind;
  bool required = false;
  bool guarded = false;  // compared against the depth guard
};

const std::map<std::string, std::vector<Param>>& analysis_schema() {
  static const std::map<std::string, std::vector<Param>> schema = {
      // Pressure over the whole language runs on the automaton and is not enumeration bound.
      {"pressure", {{"n_max", Kind::integer, true}, {"set", Kind::set}}},
      {"sft_entropy", {}},
      {"language_equality", {{"other", Kind::shift, true}, {"n_max", Kind::integer, true, true}}},
      {"cylinder", {{"v", Kind::word, true}, {"n", Kind::integer, true, true}, {"pressure", Kind::number}}},
      {"periodic_points", {{"n", Kind::integer, true, true}}},
      {"periodic_measure", {{"n", Kind::integer, true, true}, {"depth", Kind::integer, true}}},
      {"hyperbolicity", {{"n_max", Kind::integer, true, true}}},
      {"binomial_bound", {{"n_max", Kind::integer, true}}},
      {"qft", {{"n", Kind::integer, true, true}, {"bound", Kind::integer}}},
      {"sync_decomposition",
       {{"s", Kind::word, true}, {"depth", Kind::integer, false, true}, {"check_depth", Kind::integer, false, true}}},
      {"obstructions",
       {{"minus", Kind::set, true},
        {"plus", Kind::set, true},
        {"M_list", Kind::int_list},
        {"depth", Kind::integer, false, true},
        {"tau_max", Kind::integer},
        {"persistence_depth", Kind::integer, false, true}}},
      {"cgc",
       {{"minus", Kind::set, true},
        {"plus", Kind::set, true},
        {"eps", Kind::number},
        {"depth", Kind::integer, false, true},
        {"istar_depth", Kind::integer, false, true},
        {"tau_max", Kind::integer},
        {"delta", Kind::number},
        {"M_grid", Kind::int_list},
        {"N_grid", Kind::int_list},
        {"check_depth", Kind::integer, false, true},
        {"words", Kind::words}}},
      {"sync_triple",
       {{"G", Kind::set},
        {"tau", Kind::integer},
        {"cert_depth", Kind::integer, false, true},
        {"seed_v", Kind::word},
        {"seed_w", Kind::word},
        {"seed_length", Kind::integer},
        {"overlap_search_depth", Kind::integer, false, true},
        {"family_depth", Kind::integer, false, true},
        {"e_fraction", Kind::object},
        {"words", Kind::words}}},
      {"tower",
       {{"generators", Kind::words},
        {"family", Kind::object},
        {"depth", Kind::integer, false, true},
        {"base", Kind::word},
        {"n_max", Kind::integer},
        {"delta", Kind::number},
        {"marking_windows", Kind::words},
        {"test_union", Kind::boolean}}},
      {"unique_decipherability", {{"generators", Kind::words}, {"family", Kind::object}, {"depth", Kind::integer, false, true}}},
      {"generator_obstruction",
       {{"generators", Kind::words},
        {"family", Kind::object},
        {"depth", Kind::integer, false, true},
        {"n_max", Kind::integer, false, true},
        {"delta", Kind::number}}},
  };
  return schema;
}

const std::map<std::string, std::vector<std::string>>& set_kinds() {
  static const std::map<std::string, std::vector<std::string>> kinds = {
      {"language", {}},        {"empty", {}},          {"finite", {"words"}},   {"avoid", {"factor"}},
      {"contains", {"factor"}}, {"powers", {"word"}},  {"starts_with", {"word"}}, {"ends_with", {"word"}},
      {"expansion_prefixes", {}},
  };
  return kinds;
}

const std::map<std::string, std::vector<std::string>>& shift_required() {
  static const std::map<std::string, std::vector<std::string>> req = {
      {"sft", {"alphabet"}},     {"cycle_sft", {"k"}},
      {"beta", {}},              {"s_gap", {}},
      {"coded", {"alphabet", "generators"}}, {"cocyclic", {"alphabet", "matrices"}},
      {"factor", {"source", "radius", "alphabet", "table"}},
  };
  return req;
}

class Validator {
 public:
  Validator(std::vector<Diagnostic>& d, std::optional<std::size_t> guard) : diags_(d), guard_override_(guard) {}

  void error(const std::string& f, const std::string& m) { diags_.push_back({true, f, m}); }
  void warn(const std::string& f, const std::string& m) { diags_.push_back({false, f, m}); }

  bool shift(const json& s, const std::string& path) {
    if (!s.is_object()) {
      error(path, "must be an object");
      return false;
    }
    if (!s.contains("type") || !s.at("type").is_string()) {
      error(path + ".type", "missing shift type");
      return false;
    }
    const std::string type = s.at("type").get<std::string>();
    auto it = shift_required().find(type);
    if (it == shift_required().end()) {
      error(path + ".type", "unknown shift type '" + type + "'");
      return false;
    }
    bool ok = true;
    for (const auto& key : it->second)
      if (!s.contains(key)) {
        error(path + "." + key, "required field is missing");
        ok = false;
      }
    if (s.contains("alphabet")) {
      const json& a = s.at("alphabet");
      if (!a.is_array() || a.empty() || !std::all_of(a.begin(), a.end(), [](const json& x) { return x.is_string(); })) {
        error(path + ".alphabet", "must be a non-empty list of symbol strings");
        ok = false;
      } else {
        std::set<std::string> seen;
        for (const auto& x : a)
          if (!seen.insert(x.get<std::string>()).second) {
            error(path + ".alphabet", "duplicate symbol '" + x.get<std::string>() + "'");
            ok = false;
          }
      }
    }
    if (type == "beta" && !s.contains("beta") && !s.contains("period"))
      error(path, "beta shift needs 'beta' or 'period'"), ok = false;
    if (type == "s_gap" && !s.contains("S") && !s.contains("cofinite_from"))
      error(path, "S-gap shift needs 'S' or 'cofinite_from'"), ok = false;
    if (type == "factor" && s.contains("source")) ok = shift(s.at("source"), path + ".source") && ok;
    return ok;
  }

  std::size_t guard_for(const LanguageOracle& o) const { return guard_override_ ? *guard_override_ : o.enumeration_limit(); }

  void word(const json& w, const std::string& path, const Alphabet& a) {
    if (!w.is_string()) {
      error(path, "must be a word written as a symbol string");
      return;
    }
    try {
      a.parse(w.get<std::string>());
    } catch (const std::exception& e) {
      error(path, e.what());
    }
  }

  void set(const json& s, const std::string& path, const Alphabet& a) {
    if (!s.is_object() || !s.contains("kind") || !s.at("kind").is_string()) {
      error(path + ".kind", "set needs a kind");
      return;
    }
    auto it = set_kinds().find(s.at("kind").get<std::string>());
    if (it == set_kinds().end()) {
      error(path + ".kind", "unknown set kind '" + s.at("kind").get<std::string>() + "'");
      return;
    }
    for (const auto& key : it->second) {
      if (!s.contains(key)) {
        error(path + "." + key, "required field is missing");
        continue;
      }
      if (key == "words") {
        if (!s.at(key).is_array()) error(path + ".words", "must be a list of words");
        else
          for (std::size_t i = 0; i < s.at(key).size(); ++i) word(s.at(key)[i], path + ".words[" + std::to_string(i) + "]", a);
      } else {
        word(s.at(key), path + "." + key, a);
      }
    }
  }

  void analysis(const json& req, const std::string& path, const LanguageOracle& o) {
    if (!req.is_object() || !req.contains("type") || !req.at("type").is_string()) {
      error(path + ".type", "missing analysis type");
      return;
    }
    const std::string type = req.at("type").get<std::string>();
    auto it = analysis_schema().find(type);
    if (it == analysis_schema().end()) {
      error(path + ".type", "unknown analysis '" + type + "'");
      return;
    }
    std::set<std::string> known{"type", "name"};
    for (const Param& p : it->second) {
      known.insert(p.name);
      const std::string f = path + "." + p.name;
      if (!req.contains(p.name)) {
        if (p.required) error(f, "required field is missing");
        continue;
      }
      const json& v = req.at(p.name);
      switch (p.kind) {
        case Kind::integer:
          if (!v.is_number_unsigned()) error(f, "must be a non-negative integer");
          else if (p.guarded && v.get<std::size_t>() > guard_for(o))
            warn(f, std::string(p.name) + "=" + std::to_string(v.get<std::size_t>()) + " exceeds the depth guard " +
                        std::to_string(guard_for(o)));
          break;
        case Kind::number:
          if (!v.is_number()) error(f, "must be a number");
          break;
        case Kind::boolean:
          if (!v.is_boolean()) error(f, "must be true or false");
          break;
        case Kind::string:
          if (!v.is_string()) error(f, "must be a string");
          break;
        case Kind::word:
          word(v, f, o.alphabet());
          break;
        case Kind::words:
          if (!v.is_array()) error(f, "must be a list of words");
          else
            for (std::size_t i = 0; i < v.size(); ++i) word(v[i], f + "[" + std::to_string(i) + "]", o.alphabet());
          break;
        case Kind::set:
          set(v, f, o.alphabet());
          break;
        case Kind::shift:
          shift(v, f);
          break;
        case Kind::int_list:
          if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_unsigned(); }))
            error(f, "must be a list of non-negative integers");
          break;
        case Kind::object:
          if (!v.is_object()) error(f, "must be an object");
          break;
      }
    }
    for (auto jt = req.begin(); jt != req.end(); ++jt)
      if (!known.count(jt.key())) warn(path + "." + jt.key(), "unknown parameter is ignored");
    if (type == "pressure" && req.contains("set") && req.at("set").value("kind", "") != "language" &&
        req.contains("n_max") && req.at("n_max").is_number_unsigned() && req.at("n_max").get<std::size_t>() > guard_for(o))
      warn(path + ".n_max", "n_max=" + std::to_string(req.at("n_max").get<std::size_t>()) + " exceeds the depth guard " +
                                std::to_string(guard_for(o)));
    if ((type == "tower" || type == "unique_decipherability" || type == "generator_obstruction") &&
        !req.contains("generators") && !req.contains("family"))
      error(path, "needs 'generators' or 'family'");
    if (req.contains("family") && req.at("family").is_object()) {
      const json& fam = req.at("family");
      if (!fam.contains("star") && !fam.contains("triple") && !fam.contains("set"))
        error(path + ".family", "needs one of 'star', 'triple', 'set'");
      if (fam.contains("star")) {
        if (!fam.at("star").is_array()) error(path + ".family.star", "must be a list of words");
        else
          for (std::size_t i = 0; i < fam.at("star").size(); ++i)
            word(fam.at("star")[i], path + ".family.star[" + std::to_string(i) + "]", o.alphabet());
      }
      if (fam.contains("set")) set(fam.at("set"), path + ".family.set", o.alphabet());
    }
  }

 private:
  std::vector<Diagnostic>& diags_;
  std::optional<std::size_t> guard_override_;
};

}  // namespace

std::vector<Diagnostic> validate_config(const json& cfg, std::optional<std::size_t> depth_guard) {
  std::vector<Diagnostic> diags;
  Validator v(diags, depth_guard);
  if (!cfg.is_object()) {
    v.error("", "config must be an object");
    return diags;
  }
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (it.key() != "shift" && it.key() != "potential" && it.key() != "analyses" && it.key() != "output")
      v.warn(it.key(), "unknown top-level field is ignored");
  if (!cfg.contains("shift")) {
    v.error("shift", "required field is missing");
    return diags;
  }
  if (!v.shift(cfg.at("shift"), "shift")) return diags;
  OraclePtr oracle;
  OracleOptions options;
  options.depth_guard = depth_guard;
  try {
    oracle = build_shift(cfg.at("shift"), options);
  } catch (const std::exception& e) {
    v.error("shift", e.what());
    return diags;
  }
  if (cfg.contains("potential")) {
    try {
      build_potential(cfg.at("potential"), *oracle);
    } catch (const std::exception& e) {
      v.error("potential", e.what());
    }
  }
  if (!cfg.contains("analyses") || !cfg.at("analyses").is_array()) {
    v.error("analyses", "must be a list of analysis requests");
  } else {
    std::set<std::string> names;
    for (std::size_t i = 0; i < cfg.at("analyses").size(); ++i) {
      const json& a = cfg.at("analyses")[i];
      const std::string path = "analyses[" + std::to_string(i) + "]";
      v.analysis(a, path, *oracle);
      if (a.is_object() && a.contains("name")) {
        if (!a.at("name").is_string()) v.error(path + ".name", "must be a string");
        else if (!names.insert(a.at("name").get<std::string>()).second) v.error(path + ".name", "duplicate analysis name");
      }
    }
  }
  if (cfg.contains("output")) {
    const json& o = cfg.at("output");
    if (!o.is_object()) v.error("output", "must be an object");
    else {
      if (o.contains("dir") && !o.at("dir").is_string()) v.error("output.dir", "must be a string");
      if (o.contains("formats")) {
        const json& f = o.at("formats");
        if (!f.is_array()) v.error("output.formats", "must be a list");
        else
          for (const auto& x : f)
            if (!x.is_string() || (x != "csv" && x != "dat" && x != "json"))
              v.error("output.formats", "formats are json, csv and dat");
      }
    }
  }
  return diags;
}

}  // namespace symdyn::cli
