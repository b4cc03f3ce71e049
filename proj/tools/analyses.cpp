#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "symdyn/decomp.hpp"
#include "symdyn/error.hpp"
#include "symdyn/models.hpp"
#include "symdyn/thermo.hpp"
#include "symdyn/tower.hpp"

namespace symdyn::cli {

namespace {

// Small CSV builder; doubles at 17 significant digits.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ += (i ? "," : "") + header[i];
    out_ += "\n";
  }
  Csv& cell(const std::string& s) {
    sep();
    out_ += s;
    return *this;
  }
  Csv& cell(double x) { return cell(fmt_double(x)); }
  Csv& cell(std::size_t x) { return cell(std::to_string(x)); }
  Csv& cell(bool b) { return cell(std::string(b ? "1" : "0")); }
  void end() {
    out_ += "\n";
    fresh_ = true;
  }
  const std::string& str() const { return out_; }

 private:
  void sep() {
    if (!fresh_) out_ += ",";
    fresh_ = false;
  }
  std::string out_;
  bool fresh_ = true;
};

class Dat {
 public:
  explicit Dat(const std::string& comment) : out_("# " + comment + "\n") {}
  void add(double x, double y) { out_ += fmt_double(x) + " " + fmt_double(y) + "\n"; }
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

std::string fmt(const Context& ctx, WordView w) { return ctx.oracle->alphabet().format(w); }

json words_json(const Context& ctx, const std::vector<Word>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back(fmt(ctx, w));
  return a;
}

Word word_param(const Context& ctx, const json& req, const char* key) {
  return ctx.oracle->alphabet().parse(req.at(key).get<std::string>());
}

std::vector<Word> words_param(const Context& ctx, const json& j) {
  std::vector<Word> out;
  for (const auto& s : j) out.push_back(ctx.oracle->alphabet().parse(s.get<std::string>()));
  return out;
}

template <class T>
T get_or(const json& req, const char* key, T fallback) {
  return req.contains(key) ? req.at(key).get<T>() : fallback;
}

json double_or_null(double x) { return std::isfinite(x) ? json(x) : json(fmt_double(x)); }

json verdict_json(const Context& ctx, const Verdict& v) {
  json j;
  j["condition"] = v.condition;
  j["depth"] = v.depth;
  j["pass"] = v.pass;
  j["depth_certified"] = v.depth_certified;
  j["witness_total"] = v.witness_total;
  json ws = json::array();
  for (const auto& tuple : v.witnesses) ws.push_back(words_json(ctx, tuple));
  j["witnesses"] = ws;
  json params = json::object();
  for (const auto& [k, x] : v.parameters) params[k] = double_or_null(x);
  j["parameters"] = params;
  j["notes"] = v.notes;
  return j;
}

json gap_json(const GapVerdict& g) {
  return {{"pass", g.pass}, {"min_gap", double_or_null(g.min_gap)}, {"from_n", g.from_n}, {"to_n", g.to_n}};
}

json pressure_json(const PressureReport& r) {
  json j;
  j["point_estimate"] = double_or_null(r.point_estimate);
  j["last_rate"] = double_or_null(r.last_rate);
  j["full_language"] = r.full_language;
  j["fekete_upper"] = r.fekete_upper ? double_or_null(*r.fekete_upper) : json(nullptr);
  j["distortion"] = double_or_null(r.distortion);
  j["flags"] = r.flags;
  return j;
}

std::string pressure_csv(const PressureReport& r) {
  Csv csv({"n", "log_sum", "rate", "upper_bound"});
  for (const auto& row : r.table) {
    csv.cell(row.n).cell(row.log_sum).cell(row.rate).cell(row.upper_bound);
    csv.end();
  }
  return csv.str();
}

std::string rate_dat(const PressureReport& r, const std::string& label) {
  Dat dat("n rate (" + label + ")");
  for (const auto& row : r.table) dat.add(static_cast<double>(row.n), row.rate);
  return dat.str();
}

SftSpec sft_spec_of(const json& shift) {
  const std::string type = shift.at("type").get<std::string>();
  if (type == "cycle_sft") return cycle_sft_spec(shift.at("k").get<std::size_t>());
  if (type != "sft") throw Error(ErrorKind::invalid_argument, "sft_entropy needs an sft or cycle_sft shift");
  Alphabet a(shift.at("alphabet").get<std::vector<std::string>>());
  std::vector<Word> forbidden;
  if (shift.contains("forbidden"))
    for (const auto& s : shift.at("forbidden")) forbidden.push_back(a.parse(s.get<std::string>()));
  return {a, forbidden};
}

// Driving sequence prefix for expansion_prefixes sets.
Word driving_sequence(const json& shift, std::size_t n) {
  if (shift.at("type") != "beta") throw Error(ErrorKind::invalid_argument, "expansion_prefixes needs a beta shift");
  auto digits = [](const std::string& s) {
    Word w;
    for (char ch : s) w.push_back(static_cast<Symbol>(ch - '0'));
    return w;
  };
  if (shift.contains("period")) {
    Word pre = shift.contains("preperiod") ? digits(shift.at("preperiod").get<std::string>()) : Word{};
    Word per = digits(shift.at("period").get<std::string>());
    Word z = pre;
    while (z.size() < n) z.insert(z.end(), per.begin(), per.end());
    z.resize(n);
    return z;
  }
  return quasi_greedy(shift.at("beta").get<double>(), n, get_or(shift, "tolerance", 1e-12)).digits;
}

// ---- families ----

struct Family {
  std::optional<WordSet> F;
  std::vector<Word> I;
  std::optional<FreeFamily> free;
  json info = json::object();
};

Family resolve_family(const json& req, const Context& ctx, std::size_t depth) {
  Family fam;
  const OraclePtr& o = ctx.oracle;
  if (req.contains("generators")) {
    fam.I = words_param(ctx, req.at("generators"));
    fam.F = WordSet::star(WordSet::finite(o, fam.I, "I"), "I*");
    fam.info["source"] = "generators";
    return fam;
  }
  const json& spec = req.at("family");
  if (spec.contains("star")) {
    WordSet base = WordSet::finite(o, words_param(ctx, spec.at("star")), "A");
    fam.free = build_free_family(WordSet::star(base, "A*").at_least(1, "A+"), depth);
    fam.info["source"] = "star";
  } else if (spec.contains("set")) {
    fam.free = build_free_family(build_set(spec.at("set"), ctx), depth);
    fam.info["source"] = "set";
  } else {
    const json& ts = spec.at("triple");
    WordSet G = ts.contains("G") ? build_set(ts.at("G"), ctx) : WordSet::language(o);
    SyncOptions so;
    so.tau = get_or<std::size_t>(ts, "tau", 0);
    so.cert_depth = get_or<std::size_t>(ts, "cert_depth", 10);
    if (ts.contains("seed_v")) so.seed_v = word_param(ctx, ts, "seed_v");
    if (ts.contains("seed_w")) so.seed_w = word_param(ctx, ts, "seed_w");
    SyncTriple t = find_sync_triple(G, so);
    if (get_or(ts, "overlap_free", true)) t = ensure_no_long_overlaps(t, G, get_or<std::size_t>(ts, "overlap_search_depth", 12));
    fam.free = build_free_family(t, G, depth);
    fam.info["source"] = "triple";
    fam.info["triple"] = {{"r", fmt(ctx, t.r)}, {"c", fmt(ctx, t.c)}, {"s", fmt(ctx, t.s)}};
  }
  fam.F = fam.free->F;
  fam.I = fam.free->irreducibles;
  fam.info["gcd_lengths"] = fam.free->gcd_lengths;
  return fam;
}

json ud_json(const Context& ctx, const UdVerdict& ud) {
  json j;
  j["pass"] = ud.pass;
  j["code_words"] = ud.code_words;
  j["dangling_suffixes"] = ud.dangling_suffixes;
  if (!ud.pass) {
    j["witness"] = fmt(ctx, ud.witness);
    j["factorisation_a"] = words_json(ctx, ud.factorisation_a);
    j["factorisation_b"] = words_json(ctx, ud.factorisation_b);
  }
  return j;
}

// ---- analyses ----

using Handler = json (*)(const json&, const Context&, const std::string&, Files&);

json run_pressure(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  WordSet set = req.contains("set") ? build_set(req.at("set"), ctx) : WordSet::language(ctx.oracle);
  auto rep = pressure_estimate(set, ctx.phi, req.at("n_max").get<std::size_t>());
  json j = pressure_json(rep);
  j["set"] = set.label();
  files[stem + ".csv"] = pressure_csv(rep);
  files[stem + ".dat"] = rate_dat(rep, set.label());
  return j;
}

json run_sft_entropy(const json&, const Context& ctx, const std::string& stem, Files& files) {
  auto e = sft_entropy(sft_spec_of(ctx.config.at("shift")));
  Csv csv({"entropy", "row_sum_exact", "iterations"});
  csv.cell(e.value).cell(e.row_sum_exact).cell(e.iterations);
  csv.end();
  files[stem + ".csv"] = csv.str();
  return {{"entropy", e.value}, {"row_sum_exact", e.row_sum_exact}, {"iterations", e.iterations}};
}

json run_language_equality(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  OraclePtr other = build_shift(req.at("other"), ctx.options);
  if (!(other->alphabet() == ctx.oracle->alphabet()))
    throw Error(ErrorKind::invalid_argument, "the two shifts have different alphabets");
  const std::size_t n_max = req.at("n_max").get<std::size_t>();
  Csv csv({"n", "count", "count_other", "equal"});
  bool equal = true;
  json first = nullptr;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto a = ctx.oracle->enumerate(n);
    auto b = other->enumerate(n);
    bool eq = a == b;
    if (!eq && equal) {
      std::vector<Word> diff;
      std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
      first = {{"n", n}, {"word", fmt(ctx, diff.front())}, {"in_first", std::binary_search(a.begin(), a.end(), diff.front())}};
    }
    equal = equal && eq;
    csv.cell(n).cell(a.size()).cell(b.size()).cell(eq);
    csv.end();
  }
  files[stem + ".csv"] = csv.str();
  return {{"equal", equal}, {"n_max", n_max}, {"first_difference", first}};
}

json run_cylinder(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  std::optional<double> p;
  if (req.contains("pressure")) p = req.at("pressure").get<double>();
  auto t = cylinder_count_table(ctx.oracle, ctx.phi, word_param(ctx, req, "v"), req.at("n").get<std::size_t>(), p);
  Csv csv({"i", "log_sum", "sum", "log_ratio"});
  Dat dat("i log_ratio");
  for (const auto& r : t.rows) {
    csv.cell(r.i).cell(r.log_sum).cell(r.count).cell(r.log_ratio);
    csv.end();
    dat.add(static_cast<double>(r.i), r.log_ratio);
  }
  files[stem + ".csv"] = csv.str();
  files[stem + ".dat"] = dat.str();
  return {{"n", t.n},
          {"v", fmt(ctx, t.v)},
          {"pressure", t.pressure},
          {"min_log_ratio", double_or_null(t.min_ratio)},
          {"max_log_ratio", double_or_null(t.max_ratio)}};
}

json run_periodic_points(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  const std::size_t n = req.at("n").get<std::size_t>();
  Csv csv({"n", "count", "exact"});
  json last;
  bool exact = true;
  for (std::size_t m = 1; m <= n; ++m) {
    auto pp = periodic_points(*ctx.oracle, m);
    exact = exact && pp.exact;
    csv.cell(m).cell(pp.words.size()).cell(pp.exact);
    csv.end();
    if (m == n) {
      std::vector<Word> shown(pp.words.begin(), pp.words.begin() + std::min<std::size_t>(pp.words.size(), kMaxWitnesses));
      last = {{"count", pp.words.size()}, {"words", words_json(ctx, shown)}, {"truncated", pp.words.size() > shown.size()}};
    }
  }
  files[stem + ".csv"] = csv.str();
  return {{"n", n}, {"exact", exact}, {"at_n", last}};
}

json run_periodic_measure(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  auto m = periodic_orbit_measure(*ctx.oracle, ctx.phi, req.at("n").get<std::size_t>(), req.at("depth").get<std::size_t>());
  Csv csv({"word", "weight"});
  for (const auto& [w, x] : m.cylinder_weights) {
    csv.cell(fmt(ctx, w)).cell(x);
    csv.end();
  }
  files[stem + ".csv"] = csv.str();
  json atoms = json::array();
  for (std::size_t i = 0; i < m.atoms.size() && i < kMaxWitnesses; ++i)
    atoms.push_back({{"p", fmt(ctx, m.atoms[i].p)}, {"period", m.atoms[i].period}, {"weight", m.atoms[i].weight}});
  return {{"n", m.n},
          {"depth", m.depth},
          {"atom_count", m.atoms.size()},
          {"atoms", atoms},
          {"exact", m.exact},
          {"invariance_defect", m.invariance_defect()}};
}

json run_hyperbolicity(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  auto h = hyperbolicity_diagnostic(ctx.oracle, ctx.phi, req.at("n_max").get<std::size_t>());
  Csv csv({"n", "sup_rate", "rate", "gap"});
  Dat dat("n gap");
  for (const auto& r : h.table) {
    csv.cell(r.n).cell(r.sup_rate).cell(r.rate).cell(r.gap);
    csv.end();
    dat.add(static_cast<double>(r.n), r.gap);
  }
  files[stem + ".csv"] = csv.str();
  files[stem + ".dat"] = dat.str();
  return {{"pressure_estimate", h.pressure_estimate}, {"sup_rate_estimate", h.sup_rate_estimate}, {"hyperbolic", h.hyperbolic}};
}

json run_binomial_bound(const json& req, const Context&, const std::string& stem, Files& files) {
  const std::size_t n_max = req.at("n_max").get<std::size_t>();
  Csv csv({"n", "worst_l", "worst_slack", "holds"});
  std::size_t failures = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    double worst = std::numeric_limits<double>::infinity();
    std::size_t worst_l = 0;
    bool holds = true;
    for (std::size_t l = 0; l <= n; ++l) {
      auto b = binomial_entropy_bound(n, l);
      if (!b.holds) ++failures, holds = false;
      if (b.log_bound - b.log_binomial < worst) worst = b.log_bound - b.log_binomial, worst_l = l;
    }
    csv.cell(n).cell(worst_l).cell(worst).cell(holds);
    csv.end();
  }
  files[stem + ".csv"] = csv.str();
  return {{"n_max", n_max}, {"failures", failures}, {"pass", failures == 0}};
}

json run_qft(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  auto t = qft_constraints(ctx.oracle, req.at("n").get<std::size_t>(), get_or<std::size_t>(req, "bound", 12));
  Csv csv({"n", "left", "right"});
  json left = json::array(), right = json::array();
  for (std::size_t i = 0; i < t.left.size(); ++i) {
    csv.cell(i + 1).cell(t.left[i].size()).cell(t.right[i].size());
    csv.end();
    left.push_back(words_json(ctx, t.left[i]));
    right.push_back(words_json(ctx, t.right[i]));
  }
  files[stem + ".csv"] = csv.str();
  return {{"exact", t.exact}, {"flags", t.flags}, {"left", left}, {"right", right}};
}

json run_sync_decomposition(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  const std::size_t depth = get_or<std::size_t>(req, "depth", 10);
  auto r = sync_decomposition(ctx.oracle, word_param(ctx, req, "s"), depth);
  json j{{"connector", fmt(ctx, r.connector)}, {"tau", r.collections.tau}, {"check", verdict_json(ctx, r.check)}};
  const std::size_t cd = get_or<std::size_t>(req, "check_depth", 0);
  if (cd > 0) {
    j["spec_I"] = verdict_json(ctx, check_spec_I(r.collections, cd));
    j["stay_good_III"] = verdict_json(ctx, check_stay_good_III(r.collections, cd));
  }
  Csv csv({"check", "depth", "pass"});
  csv.cell(r.check.condition).cell(r.check.depth).cell(r.check.pass);
  csv.end();
  files[stem + ".csv"] = csv.str();
  return j;
}

ObstructionPair pair_of(const json& req, const Context& ctx) {
  return {build_set(req.at("minus"), ctx), build_set(req.at("plus"), ctx), 1, {}};
}

json run_obstructions(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  ObstructionPair pair = pair_of(req, ctx);
  auto M_list = get_or(req, "M_list", std::vector<std::size_t>{1, 2, 3, 4});
  const std::size_t depth = get_or<std::size_t>(req, "depth", 10);
  auto istar = check_complete_list_Istar(pair, M_list, depth, get_or<std::size_t>(req, "tau_max", 12));
  Csv csv({"M", "tau"});
  json taus = json::array();
  for (const auto& [M, tau] : istar.tau_table) {
    csv.cell(M).cell(tau ? std::to_string(*tau) : std::string("none"));
    csv.end();
    taus.push_back({{"M", M}, {"tau", tau ? json(*tau) : json(nullptr)}});
  }
  files[stem + ".csv"] = csv.str();
  json j{{"tau_table", taus}, {"istar", verdict_json(ctx, istar.verdict)}};
  const std::size_t pd = get_or<std::size_t>(req, "persistence_depth", depth);
  j["persistence"] = verdict_json(ctx, check_persistence(pair, pd));
  return j;
}

json run_cgc(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  ObstructionPair pair = pair_of(req, ctx);
  CgcOptions o;
  o.M_grid = get_or(req, "M_grid", o.M_grid);
  o.N_grid = get_or(req, "N_grid", o.N_grid);
  o.depth = get_or(req, "depth", o.depth);
  o.istar_depth = get_or(req, "istar_depth", o.istar_depth);
  o.tau_max = get_or(req, "tau_max", o.tau_max);
  o.delta = get_or(req, "delta", o.delta);
  auto r = cgc_construct(pair, ctx.phi, get_or(req, "eps", 0.1), o);
  Csv csv({"M", "N", "tau", "hat_p_ok", "gap_ok", "entropy_term", "log2_over_N", "reason"});
  for (const auto& c : r.candidates) {
    csv.cell(c.M).cell(c.N).cell(c.tau ? std::to_string(*c.tau) : std::string("none")).cell(c.hat_p_ok).cell(c.gap_ok);
    csv.cell(c.entropy_term).cell(c.log2_over_N).cell("\"" + c.reason + "\"");
    csv.end();
  }
  files[stem + ".csv"] = csv.str();
  files[stem + "_gap.csv"] = pressure_csv(r.gap.obstruction);
  json j{{"M", r.M},
         {"N", r.N},
         {"tau", r.collections.tau},
         {"gap", gap_json(r.gap.verdict)},
         {"obstruction_pressure", pressure_json(r.gap.obstruction)},
         {"language_pressure", pressure_json(r.gap.language)}};
  const std::size_t cd = get_or<std::size_t>(req, "check_depth", 0);
  if (cd > 0) {
    j["spec_I"] = verdict_json(ctx, check_spec_I(r.collections, cd));
    j["stay_good_III"] = verdict_json(ctx, check_stay_good_III(r.collections, cd));
  }
  if (req.contains("words")) {
    json ds = json::array();
    for (const Word& w : words_param(ctx, req.at("words"))) {
      auto d = greedy_decompose(r, w);
      ds.push_back({{"word", fmt(ctx, w)},
                    {"prefix", fmt(ctx, prefix(w, d.prefix_end))},
                    {"middle", fmt(ctx, subword(w, d.prefix_end + 1, d.good_end))},
                    {"suffix", fmt(ctx, subword(w, d.good_end + 1, w.size()))}});
    }
    j["decompositions"] = ds;
  }
  return j;
}

SyncMode mode_of(const json& j) {
  const std::string m = get_or<std::string>(j, "mode", "uniform");
  if (m == "uniform") return SyncMode::uniform;
  if (m == "non_uniform") return SyncMode::non_uniform;
  throw Error(ErrorKind::invalid_argument, "mode must be uniform or non_uniform");
}

json triple_json(const Context& ctx, const SyncTriple& t) {
  return {{"r", fmt(ctx, t.r)},
          {"c", fmt(ctx, t.c)},
          {"s", fmt(ctx, t.s)},
          {"tau", t.tau},
          {"cert_depth", t.cert_depth},
          {"no_long_overlaps", t.no_long_overlaps},
          {"notes", t.notes}};
}

// Closure of F under concatenation for |u| + |v| <= depth.
json free_concatenation_check(const Context& ctx, const WordSet& F, std::size_t depth) {
  std::size_t checked = 0;
  json witness = nullptr;
  for (std::size_t a = 1; a < depth && witness.is_null(); ++a)
    for (const Word& u : F.words(a)) {
      for (std::size_t b = 1; a + b <= depth && witness.is_null(); ++b)
        for (const Word& v : F.words(b)) {
          ++checked;
          if (!F.contains(concat(u, v))) {
            witness = {fmt(ctx, u), fmt(ctx, v)};
            break;
          }
        }
      if (!witness.is_null()) break;
    }
  return {{"depth", depth}, {"pairs_checked", checked}, {"pass", witness.is_null()}, {"witness", witness}};
}

json run_sync_triple(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  WordSet G = req.contains("G") ? build_set(req.at("G"), ctx) : WordSet::language(ctx.oracle);
  SyncOptions so;
  so.tau = get_or<std::size_t>(req, "tau", 0);
  so.cert_depth = get_or<std::size_t>(req, "cert_depth", 10);
  so.seed_length = get_or<std::size_t>(req, "seed_length", 1);
  if (req.contains("seed_v")) so.seed_v = word_param(ctx, req, "seed_v");
  if (req.contains("seed_w")) so.seed_w = word_param(ctx, req, "seed_w");
  SyncTriple t = find_sync_triple(G, so);
  json j;
  j["triple"] = triple_json(ctx, t);
  auto bad = verify_sync_triple(G, t, so.cert_depth);
  j["verified"] = {{"depth", so.cert_depth}, {"pass", !bad}};
  auto k = first_long_overlap(*ctx.oracle, t);
  j["first_long_overlap"] = k ? json(*k) : json(nullptr);
  OverlapSearch info;
  SyncTriple t2 = ensure_no_long_overlaps(t, G, get_or<std::size_t>(req, "overlap_search_depth", 12), &info);
  j["extended"] = triple_json(ctx, t2);
  j["extended"]["first_long_overlap"] = first_long_overlap(*ctx.oracle, t2) ? json(true) : json(false);
  j["overlap_search"] = {{"ell", info.ell}, {"alpha", info.alpha}, {"search_depth", info.search_depth}, {"candidates", info.candidates}};
  const std::size_t fd = get_or<std::size_t>(req, "family_depth", 10);
  FreeFamily fam = build_free_family(t2, G, fd);
  j["family"] = {{"depth", fam.depth},
                 {"gcd_lengths", fam.gcd_lengths},
                 {"irreducible_count", fam.irreducibles.size()},
                 {"free_concatenation", free_concatenation_check(ctx, fam.F, fd)}};
  Csv csv({"n", "log_e", "log_l", "fraction"});
  Dat dat("n fraction");
  if (req.contains("e_fraction")) {
    const json& e = req.at("e_fraction");
    auto rows = e_fraction_table(t2, G, mode_of(e), get_or<std::size_t>(e, "from", 10), get_or<std::size_t>(e, "to", 20));
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv.cell(rows[i].n).cell(rows[i].log_e).cell(rows[i].log_l).cell(rows[i].fraction);
      csv.end();
      dat.add(static_cast<double>(rows[i].n), rows[i].fraction);
      if (i > 0 && !(rows[i].fraction < rows[i - 1].fraction)) monotone = false;
    }
    j["e_fraction"] = {{"rows", rows.size()}, {"strictly_decreasing", monotone}};
  }
  files[stem + ".csv"] = csv.str();
  files[stem + ".dat"] = dat.str();
  if (req.contains("words")) {
    json st = json::array();
    for (const Word& w : words_param(ctx, req.at("words"))) {
      auto times = sync_times(w, t2, &G, SyncMode::non_uniform);
      st.push_back({{"word", fmt(ctx, w)}, {"times", times}});
    }
    j["sync_times"] = st;
  }
  return j;
}

json loops_csv_rows(const LoopTable& t, Csv& csv, Dat& dat) {
  for (const auto& r : t.rows) {
    const double n = static_cast<double>(r.n);
    csv.cell(r.n).cell(r.z).cell(r.z_star).cell(r.log_z).cell(r.log_z_star).cell(r.log_z / n).cell(r.log_z_star / n);
    if (t.word_side) csv.cell(*r.z_word).cell(*r.z_star_word);
    csv.end();
    if (std::isfinite(r.log_z)) dat.add(n, r.log_z);
  }
  return {{"word_side", t.word_side},
          {"tolerance", t.tolerance},
          {"max_log_difference", double_or_null(t.max_log_difference)},
          {"loop_gcd", t.loop_gcd}};
}

json run_tower(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  const std::size_t depth = get_or<std::size_t>(req, "depth", 12);
  Family fam = resolve_family(req, ctx, depth);
  json j;
  j["family"] = fam.info;
  j["irreducibles"] = words_json(ctx, fam.I);
  if (fam.I.empty()) throw Error(ErrorKind::invalid_argument, "the family has no irreducible words up to depth");
  j["unique_decipherability"] = ud_json(ctx, is_uniquely_decipherable(fam.I));
  Word base = req.contains("base") ? word_param(ctx, req, "base") : fam.I.front();
  TowerGraph tower = build_tower(fam.I, depth, base);
  j["tower"] = {{"base", fmt(ctx, base)}, {"vertices", tower.vertices().size()}, {"edges", tower.edge_count()}, {"depth", depth}};
  files[stem + "_edges.txt"] = tower.edge_list(ctx.oracle->alphabet());
  auto spr = spr_diagnostic(tower, ctx.phi, get_or<std::size_t>(req, "n_max", 40), get_or(req, "delta", 0.05),
                            fam.free ? &*fam.free : nullptr);
  std::vector<std::string> header{"n", "Z_n", "Z_n_star", "log_Z_n", "log_Z_n_star", "rate", "rate_star"};
  if (spr.loops.word_side) header.insert(header.end(), {"Z_n_word", "Z_n_star_word"});
  Csv csv(header);
  Dat dat("n log_z");
  j["loops"] = loops_csv_rows(spr.loops, csv, dat);
  files[stem + ".csv"] = csv.str();
  files[stem + ".dat"] = dat.str();
  j["spr"] = {{"rate", spr.rate},
              {"rate_star", spr.rate_star},
              {"gap", spr.gap},
              {"verdict", gap_json(spr.verdict)},
              {"degenerate", spr.degenerate},
              {"flags", spr.flags}};
  if (spr.pressure_I) j["spr"]["pressure_I"] = pressure_json(*spr.pressure_I);
  if (spr.pressure_F) j["spr"]["pressure_F"] = pressure_json(*spr.pressure_F);
  if (req.contains("marking_windows")) {
    json ms = json::array();
    for (const Word& x : words_param(ctx, req.at("marking_windows"))) {
      auto m = marking_analysis(x, *fam.F, get_or(req, "test_union", false));
      json sets = json::array();
      for (const auto& s : m.maximal_sets) sets.push_back(s);
      json mj{{"window", fmt(ctx, x)},
              {"maximal_count", m.maximal_count},
              {"maximal_sets", sets},
              {"truncated", m.truncated},
              {"injective_at_window", m.injective_at_window}};
      if (m.union_closed) mj["union_closed"] = *m.union_closed;
      ms.push_back(mj);
    }
    j["marking"] = ms;
  }
  return j;
}

json run_unique_decipherability(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  Family fam = resolve_family(req, ctx, get_or<std::size_t>(req, "depth", 12));
  auto ud = is_uniquely_decipherable(fam.I);
  Csv csv({"pass", "code_words", "dangling_suffixes", "witness"});
  csv.cell(ud.pass).cell(ud.code_words).cell(ud.dangling_suffixes).cell(ud.pass ? std::string() : fmt(ctx, ud.witness));
  csv.end();
  files[stem + ".csv"] = csv.str();
  json j = ud_json(ctx, ud);
  j["irreducibles"] = words_json(ctx, fam.I);
  return j;
}

json run_generator_obstruction(const json& req, const Context& ctx, const std::string& stem, Files& files) {
  const std::size_t depth = get_or<std::size_t>(req, "depth", 12);
  Family fam = resolve_family(req, ctx, depth);
  WordSet D = generator_obstruction_set(ctx.oracle, fam.I, depth);
  const std::size_t n_max = get_or<std::size_t>(req, "n_max", depth);
  auto pd = pressure_estimate(D, ctx.phi, n_max);
  auto pl = pressure_estimate(WordSet::language(ctx.oracle), ctx.phi, n_max);
  auto g = margin_rule(pd, pl, get_or(req, "delta", 0.05));
  files[stem + ".csv"] = pressure_csv(pd);
  files[stem + ".dat"] = rate_dat(pd, D.label());
  return {{"obstruction_pressure", pressure_json(pd)}, {"language_pressure", pressure_json(pl)}, {"gap", gap_json(g)}};
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"pressure", run_pressure},
      {"sft_entropy", run_sft_entropy},
      {"language_equality", run_language_equality},
      {"cylinder", run_cylinder},
      {"periodic_points", run_periodic_points},
      {"periodic_measure", run_periodic_measure},
      {"hyperbolicity", run_hyperbolicity},
      {"binomial_bound", run_binomial_bound},
      {"qft", run_qft},
      {"sync_decomposition", run_sync_decomposition},
      {"obstructions", run_obstructions},
      {"cgc", run_cgc},
      {"sync_triple", run_sync_triple},
      {"tower", run_tower},
      {"unique_decipherability", run_unique_decipherability},
      {"generator_obstruction", run_generator_obstruction},
  };
  return h;
}

}  // namespace

WordSet build_set(const json& spec, const Context& ctx) {
  const OraclePtr& o = ctx.oracle;
  const Alphabet& a = o->alphabet();
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "language") return WordSet::language(o);
  if (kind == "empty") return WordSet::empty(o);
  if (kind == "finite") return WordSet::finite(o, words_param(ctx, spec.at("words")), "finite");
  if (kind == "expansion_prefixes") {
    return WordSet::filter(
        o,
        [shift = ctx.config.at("shift")](WordView w) { return w.empty() || same(w, driving_sequence(shift, w.size())); },
        "expansion prefixes");
  }
  const std::string text = spec.contains("factor") ? spec.at("factor").get<std::string>() : spec.at("word").get<std::string>();
  Word p = a.parse(text);
  if (kind == "avoid")
    return WordSet::filter(
        o, [p](WordView w) { return !contains_factor(w, p); }, "avoid " + text,
        [p](WordView w) { return !contains_factor(w, p); });
  if (kind == "contains") return WordSet::filter(o, [p](WordView w) { return contains_factor(w, p); }, "contains " + text);
  if (kind == "starts_with")
    return WordSet::filter(
        o, [p](WordView w) { return starts_with(w, p); }, "starts with " + text,
        [p](WordView w) { return starts_with(w, p) || starts_with(p, w); });
  if (kind == "ends_with") return WordSet::filter(o, [p](WordView w) { return ends_with(w, p); }, "ends with " + text);
  if (kind == "powers") {
    if (p.empty()) throw Error(ErrorKind::invalid_argument, "powers needs a non-empty word");
    auto on_orbit = [p](WordView w) {
      for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] != p[i % p.size()]) return false;
      return true;
    };
    return WordSet::filter(
        o, [on_orbit, m = p.size()](WordView w) { return !w.empty() && w.size() % m == 0 && on_orbit(w); },
        "powers of " + text, on_orbit);
  }
  throw Error(ErrorKind::invalid_argument, "unknown set kind '" + kind + "'");
}

json run_analysis(const json& request, const Context& ctx, const std::string& stem, Files& files) {
  const std::string type = request.at("type").get<std::string>();
  auto it = handlers().find(type);
  if (it == handlers().end()) throw Error(ErrorKind::invalid_argument, "unknown analysis '" + type + "'");
  return it->second(request, ctx, stem, files);
}

}  // namespace symdyn::cli
