#include "addcomb/report.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace addcomb {

Json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

namespace {

Json rational(const Rational& r) { return to_string(r); }

Json index_list(const std::vector<Index>& v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

Json group_json(const GroupSpec& g) { return g.to_string(); }

}  // namespace

Json to_json(const LedgerConfig& cfg) {
  Json j;
  j["preset"] = cfg.preset;
  j["c0"] = real(cfg.c0);
  j["c"] = real(cfg.c);
  j["C"] = real(cfg.C);
  j["eps"] = real(cfg.eps);
  j["gamma"] = real(cfg.gamma);
  j["C_RC"] = real(cfg.C_RC);
  j["packet_eps"] = real(cfg.packet_eps);
  j["packet_eta"] = cfg.packet_eta ? real(*cfg.packet_eta) : Json(nullptr);
  j["C_pkt"] = real(cfg.C_pkt);
  j["packet_retries"] = cfg.packet_retries;
  j["regularity_c"] = real(cfg.regularity_c);
  j["rho_grid"] = cfg.rho_grid;
  j["seed"] = cfg.seed;
  return j;
}

LedgerConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  LedgerConfig cfg = LedgerConfig::from_preset(j.value("preset", std::string("ledger-C")));
  static const std::vector<std::string> known{"preset",     "c0",    "c",     "C",      "eps",
                                              "gamma",      "C_RC",  "packet_eps", "packet_eta", "C_pkt",
                                              "packet_retries", "regularity_c", "rho_grid", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("config: unknown field '" + key + "'");
    }
  }
  auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = real_from(j.at(key));
  };
  num("c0", cfg.c0);
  num("c", cfg.c);
  num("C", cfg.C);
  num("eps", cfg.eps);
  num("gamma", cfg.gamma);
  num("C_RC", cfg.C_RC);
  num("packet_eps", cfg.packet_eps);
  num("C_pkt", cfg.C_pkt);
  num("regularity_c", cfg.regularity_c);
  if (j.contains("packet_eta")) {
    if (j.at("packet_eta").is_null()) {
      cfg.packet_eta.reset();
    } else {
      cfg.packet_eta = real_from(j.at("packet_eta"));
    }
  }
  if (j.contains("packet_retries")) cfg.packet_retries = j.at("packet_retries").get<int>();
  if (j.contains("rho_grid")) cfg.rho_grid = j.at("rho_grid").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

LedgerConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return config_from_json(Json::parse(in));
}

Json to_json(const GroupSet& a) {
  Json j;
  j["group"] = group_json(a.group());
  j["members"] = index_list(a.members());
  return j;
}

Json to_json(const ViolationRecord& r) {
  Json j;
  j["lemma"] = r.lemma;
  j["severity"] = to_string(r.severity);
  j["group"] = group_json(r.group);
  j["set"] = index_list(r.set);
  j["preset"] = r.preset;
  j["seed"] = r.seed;
  Json m = Json::object();
  for (const auto& x : r.measured) m[x.name] = x.value;
  j["measured"] = std::move(m);
  j["note"] = r.note;
  return j;
}

ViolationRecord record_from_json(const Json& j) {
  ViolationRecord r;
  r.lemma = j.at("lemma").get<std::string>();
  r.severity = parse_severity(j.at("severity").get<std::string>());
  r.group = GroupSpec::parse(j.at("group").get<std::string>());
  r.set = j.at("set").get<std::vector<Index>>();
  r.preset = j.at("preset").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [key, value] : j.at("measured").items()) r.measured.push_back({key, value.get<std::string>()});
  r.note = j.at("note").get<std::string>();
  return r;
}

Json to_json(const IterationTrace& t) {
  Json j;
  j["initial"] = to_json(t.initial);
  j["budget"] = t.budget;
  j["terminal"] = t.terminal;
  j["total_codim"] = real(t.total_codim);
  j["codim_budget"] = real(t.codim_budget);
  j["codim_within_budget"] = t.total_codim <= t.codim_budget;
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json x;
    x["j"] = s.j;
    x["group"] = group_json(s.group);
    x["order"] = s.group.order();
    x["size"] = s.set_size;
    x["K"] = rational(s.k);
    x["alpha"] = rational(s.alpha);
    x["potential"] = real(s.potential);
    x["codim"] = real(s.codim);
    x["outcome"] = s.outcome;
    x["regime"] = s.regime;
    x["beta"] = real(s.beta);
    x["spectrum_size"] = s.spectrum_size;
    x["span_dim"] = s.span_dim;
    x["delta"] = s.delta ? rational(*s.delta) : Json(nullptr);
    x["note"] = s.note;
    steps.push_back(std::move(x));
  }
  j["steps"] = std::move(steps);
  j["final"] = to_json(t.final_set);
  if (t.near_coset) {
    j["near_coset"] = {{"representative", t.near_coset->representative},
                       {"subgroup_size", t.near_coset->h.size()},
                       {"covered_fraction", rational(t.near_coset->covered_fraction)}};
  }
  Json f = Json::array();
  for (const auto& r : t.findings) f.push_back(to_json(r));
  j["findings"] = std::move(f);
  return j;
}

namespace {

Json near_coset_json(const NearCoset& nc) {
  Json j;
  j["representative"] = nc.representative;
  j["subgroup_size"] = nc.h.size();
  j["subgroup"] = nc.h.size() <= 256 ? index_list(nc.h.elements) : Json(nullptr);
  j["covered_fraction"] = rational(nc.covered_fraction);
  j["size_bound_ok"] = nc.size_bound_ok;
  return j;
}

Json improvement_json(const Improvement& imp) {
  Json j;
  j["delta"] = rational(imp.delta);
  j["k_prime"] = rational(imp.k_prime);
  j["quotient"] = group_json(imp.map.image);
  j["a_prime"] = to_json(imp.a_prime);
  j["v_prime_size"] = imp.v_prime.size();
  j["v_prime_dim"] = imp.v_prime.dim();
  j["v_prime_basis"] = imp.v_prime.dissociated_basis ? index_list(*imp.v_prime.dissociated_basis) : Json::array();
  j["h_prime_size"] = imp.h_prime.size();
  j["witness"] = imp.witness;
  j["witness_image"] = imp.witness_image;
  j["v_prime_meets_v_trivially"] = imp.v_prime_meets_v_trivially;
  j["size_floor_ok"] = imp.size_floor_ok;
  const auto& d = imp.decrement;
  j["decrement"] = {{"eta", real(d.eta)},
                    {"eta_lift", real(d.eta_lift)},
                    {"energy_boost", real(d.energy_boost)},
                    {"floor_ok", d.floor_ok},
                    {"e2d_ok", d.e2d_ok}};
  return j;
}

Json pz_json(const PaleyZygmundReport& p) {
  return {{"theta", real(p.theta)},           {"mean", real(p.mean)},
          {"second_moment", real(p.second_moment)}, {"variance", real(p.variance)},
          {"bound", real(p.bound)},           {"true_probability", real(p.true_probability)},
          {"c1_ratio", real(p.c1_ratio)},     {"holds", p.holds}};
}

}  // namespace

Json to_json(const ChangReport& c) {
  Json j;
  j["tau"] = real(c.tau);
  j["alpha"] = real(c.alpha);
  j["spectrum_size"] = c.spectrum_size;
  j["dissociated"] = index_list(c.dissociated);
  j["bound_rhs"] = real(c.bound_rhs);
  j["energy_lhs"] = real(c.energy_lhs);
  j["energy_rhs"] = real(c.energy_rhs);
  j["measured_constant"] = real(c.measured_constant);
  j["size_constant"] = real(c.size_constant);
  j["pass"] = c.pass;
  j["rc_pass"] = c.rc_pass;
  j["chain_ok"] = c.chain_ok;
  j["window_warning"] = c.window_warning;
  j["exhaustive_max"] = c.exhaustive_max ? Json(*c.exhaustive_max) : Json(nullptr);
  return j;
}

Json to_json(const L4CompressionReport& r) {
  return {{"k", real(r.k)},
          {"tau", real(r.tau)},
          {"spectrum_size", r.spectrum_size},
          {"mass_in_s", real(r.mass_in_s)},
          {"mass_total", real(r.mass_total)},
          {"compress_rhs", real(r.compress_rhs)},
          {"compress_pass", r.compress_pass},
          {"tight_c_compress", real(r.tight_c_compress)},
          {"tail_lhs", real(r.tail_lhs)},
          {"tail_rhs", real(r.tail_rhs)},
          {"tail_pass", r.tail_pass},
          {"tight_c_tail", real(r.tight_c_tail)}};
}

Json to_json(const PSLOutcome& o) {
  const auto& a = o.artifacts;
  Json art;
  art["K"] = rational(a.k);
  art["alpha"] = real(a.alpha);
  art["tau"] = real(a.tau);
  art["spectrum"] = index_list(a.spectrum.members);
  art["dissociated"] = index_list(a.dissociated);
  art["span_size"] = a.v.size();
  art["annihilator_size"] = a.h.size();
  art["chang"] = a.chang ? to_json(*a.chang) : Json(nullptr);
  art["regime"] = {{"kind", to_string(a.regime.kind)},
                   {"beta", real(a.regime.beta)},
                   {"upper", real(a.regime.upper)},
                   {"lower", real(a.regime.lower)},
                   {"small_k", a.regime.small_k}};
  art["paley_zygmund"] = a.pz ? pz_json(*a.pz) : Json(nullptr);
  art["s3_eps_limit"] = real(a.s3_eps_limit);
  Json j;
  j["kind"] = o.kind();
  if (const auto* nc = std::get_if<NearCoset>(&o.result)) {
    j["near_coset"] = near_coset_json(*nc);
  } else if (const auto* imp = std::get_if<Improvement>(&o.result)) {
    j["improvement"] = improvement_json(*imp);
  } else {
    const auto& u = std::get<Undetermined>(o.result);
    j["undetermined"] = {{"reason", u.reason},
                         {"best_coset", u.best_coset ? near_coset_json(*u.best_coset) : Json(nullptr)},
                         {"attempted", u.attempted ? improvement_json(*u.attempted) : Json(nullptr)}};
  }
  j["artifacts"] = std::move(art);
  return j;
}

Json to_json(const PolyBogReport& r) {
  Json j;
  j["K"] = rational(r.k);
  j["tau"] = real(r.tau);
  j["four_a_minus_four_a_size"] = r.four_a_minus_four_a.size();
  j["gamma"] = index_list(r.gamma);
  j["containment_rho"] = real(r.containment_rho);
  j["grid_steps"] = r.grid_steps;
  if (r.regularity) {
    j["regularity"] = {{"rho", real(r.regularity->rho)},
                       {"rho_prime", real(r.regularity->rho_prime)},
                       {"constant", real(r.regularity->constant)},
                       {"regular", r.regularity->regular},
                       {"rank", r.regularity->rank},
                       {"grid", r.regularity->grid}};
  } else {
    j["regularity"] = nullptr;
  }
  j["rho_prime"] = real(r.rho_prime);
  j["bohr_size"] = r.bohr.elements.size();
  j["trivial_bohr"] = r.trivial_bohr;
  j["rank_ok"] = r.rank_ok;
  j["radius_ok"] = r.radius_ok;
  return j;
}

Json to_json(const ToyReport& r) {
  Json j;
  j["alpha_requested"] = real(r.alpha_requested);
  j["nominal_k"] = r.nominal_k;
  j["set"] = to_json(r.a);
  j["K"] = rational(r.k);
  j["sumset_size"] = r.sumset_size;
  j["doubling_ok"] = r.doubling_ok;
  j["tau"] = real(r.tau);
  j["sinc"] = {{"max_relative_error", real(r.sinc_max_relative_error)},
               {"window", real(r.sinc_window)},
               {"points", r.sinc_points},
               {"ok", r.sinc_ok}};
  j["spectrum"] = r.spectrum;
  j["spectrum_symmetric_interval"] = r.spectrum_symmetric_interval;
  j["chang"] = r.chang ? to_json(*r.chang) : Json(nullptr);
  j["psl"] = to_json(r.psl);
  j["trace"] = to_json(r.trace);
  j["polybog"] = to_json(r.polybog);
  return j;
}

Json to_json(const ScanResult& r) {
  Json j;
  j["instances"] = r.instances;
  j["expected_instances"] = r.expected_instances ? Json(*r.expected_instances) : Json(nullptr);
  j["count_audit_ok"] = r.count_audit_ok;
  Json t = Json::array();
  for (const auto& x : r.tallies) {
    t.push_back({{"lemma", x.lemma},
                 {"group", x.group},
                 {"evaluated", x.evaluated},
                 {"violations", x.violations},
                 {"pass_rate", real(x.evaluated ? 1.0 - static_cast<double>(x.violations) /
                                                            static_cast<double>(x.evaluated)
                                                : 1.0)}});
  }
  j["tallies"] = std::move(t);
  return j;
}

Json analyze(const GroupSet& a, const LedgerConfig& cfg, double tau) {
  if (a.empty()) throw std::invalid_argument("analyze: empty set");
  const auto& g = a.group();
  const auto t = transform(a);
  const double alpha = to_double(a.density());
  const Rational k = doubling_constant(a);
  const double kd = to_double(k);
  const double tau_used = tau > 0 ? tau : std::pow(kd, -cfg.c0);
  Json j;
  j["set"] = to_json(a);
  j["size"] = a.size();
  j["alpha"] = rational(a.density());
  j["K"] = rational(k);
  j["sumset_size"] = sumset(a, a).size();

  const auto en = additive_energy(a, t);
  j["energy"] = {{"combinatorial", en.combinatorial},
                 {"spectral", real(en.spectral)},
                 {"printed_form", real(en.printed_form)},
                 {"lower_bound", rational(en.lower_bound)},
                 {"upper_bound", en.upper_bound},
                 {"identity_residual", real(en.identity_residual)},
                 {"lower_ok", en.lower_ok},
                 {"upper_ok", en.upper_ok},
                 {"printed_form_matches", en.printed_form_matches},
                 {"parseval_residual", real(parseval_audit(DensityFunction::indicator(a), t))}};

  const auto spec = large_spectrum(t, alpha, tau_used);
  const auto d = extract_maximal_dissociated(g, spec);
  Json mags = Json::array();
  for (double m : spec.magnitudes) mags.push_back(real(m));
  j["spectrum"] = {{"tau", real(tau_used)},
                   {"members", index_list(spec.members)},
                   {"magnitudes", std::move(mags)},
                   {"dissociated", index_list(d)}};
  if (alpha < 1.0) j["chang"] = to_json(chang_audit(t, alpha, tau_used, cfg.C_RC));
  j["l4_compression"] = to_json(l4_compression_audit(t, alpha, kd, cfg));

  if (g.order() > 1) {
    DualElement top = 1;
    for (DualElement xi = 1; xi < g.order(); ++xi) {
      if (std::abs(t.coeffs[xi]) > std::abs(t.coeffs[top]) + 1e-15) top = xi;
    }
    const auto e2d = energy_to_doubling_check(t, alpha, top);
    j["e2d"] = {{"xi", e2d.xi},
                {"eta", real(e2d.eta)},
                {"lhs", real(e2d.lhs)},
                {"rhs", real(e2d.rhs)},
                {"energy_boost", real(e2d.energy_boost)},
                {"holds", e2d.holds}};
  }
  j["psl"] = to_json(psl_step(a, cfg));

  if (g.order() <= 4096) {
    Json lifts = Json::array();
    for (const auto& h : all_subgroups(g)) {
      if (h.size() == 1 || h.size() == g.order()) continue;
      const auto lc = quotient_lift_check(a, t, make_quotient_context(g, h));
      lifts.push_back({{"kernel_size", h.size()},
                       {"kernel_generators", index_list(h.generators)},
                       {"characters", lc.characters},
                       {"ab_residual", real(lc.max_ab_residual)},
                       {"ac_residual", real(lc.max_ac_residual)},
                       {"saturated", lc.saturated},
                       {"classification", to_string(lc.classification)}});
    }
    j["lift_checks"] = std::move(lifts);
  }

  if (g.order() > 1) {
    const auto ap = almost_periods(a, cfg, cfg.seed);
    j["packet"] = {{"seed", ap.packet.seed},
                   {"attempt_seed", ap.packet.attempt_seed},
                   {"attempts", ap.packet.attempts},
                   {"size", ap.packet.members.size()},
                   {"spectrum_size", ap.packet.spectrum.size()},
                   {"eps", real(ap.packet.eps)},
                   {"eta", real(ap.packet.eta)},
                   {"bias", real(ap.packet.achieved_bias)},
                   {"success", ap.packet.success},
                   {"l2_error", real(ap.l2.error)},
                   {"printed_bound", real(ap.l2.printed_bound)},
                   {"scaled_bound", real(ap.l2.scaled_bound)},
                   {"sound_bound", real(ap.l2.sound_bound)},
                   {"scaled_holds", ap.l2.scaled_holds},
                   {"sound_holds", ap.l2.sound_holds},
                   {"mean_shift_error", real(ap.shifts.mean_shift_error)},
                   {"printed_identity_residual", real(ap.shifts.printed_identity_residual)},
                   {"corrected_identity_residual", real(ap.shifts.corrected_identity_residual)},
                   {"good_shifts", ap.shifts.good.size()},
                   {"good_shifts_markov", ap.shifts.good_markov.size()},
                   {"in_difference_fraction", real(ap.in_difference_fraction)},
                   {"packet_doubling", rational(ap.packet_doubling)},
                   {"shift_count_ok", ap.shift_count_ok},
                   {"packet_size_ok", ap.packet_size_ok}};
  }

  const double boost = static_cast<double>(en.combinatorial) * static_cast<double>(g.order()) /
                           std::pow(static_cast<double>(a.size()), 4) - 1.0;
  if (boost >= 0.0 && a.size() <= 16) {
    const auto b = bsg_extract(a, 0.0);
    j["bsg"] = {{"energy_boost", real(b.energy_boost)},
                {"a0", index_list(b.a0.members())},
                {"density_in_a", rational(b.density_in_a)},
                {"doubling_a0", rational(b.doubling_a0)},
                {"oracle_doubling", b.oracle_doubling ? rational(*b.oracle_doubling) : Json(nullptr)},
                {"within_factor_two", b.within_factor_two ? Json(*b.within_factor_two) : Json(nullptr)}};
  }
  return j;
}

Json to_json(const Report& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["command"] = r.command;
  j["config"] = to_json(r.config);
  j["artifacts"] = r.artifacts;
  Json f = Json::array();
  for (const auto& x : r.findings) f.push_back(to_json(x));
  j["findings"] = std::move(f);
  j["timing"] = r.timing;
  return j;
}

Report report_from_json(const Json& j) {
  Report r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) {
    throw std::invalid_argument("report: unsupported schema version " + std::to_string(r.schema_version));
  }
  r.command = j.at("command").get<std::string>();
  r.config = config_from_json(j.at("config"));
  r.artifacts = j.at("artifacts");
  for (const auto& x : j.at("findings")) r.findings.push_back(record_from_json(x));
  r.timing = j.value("timing", Json::object());
  return r;
}

namespace {

void collect_traces(const Json& j, std::vector<const Json*>& out) {
  if (j.is_object()) {
    if (j.contains("steps") && j.contains("terminal") && j.at("steps").is_array()) out.push_back(&j);
    for (const auto& [key, value] : j.items()) collect_traces(value, out);
  } else if (j.is_array()) {
    for (const auto& v : j) collect_traces(v, out);
  }
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string ledger_csv(const Report& r) {
  std::vector<const Json*> traces;
  collect_traces(r.artifacts, traces);
  std::ostringstream out;
  out << "trace,j,group,order,K,alpha,I,codim,outcome,delta\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (const auto& s : traces[i]->at("steps")) {
      out << i << ',' << s.at("j").get<int>() << ',' << '"' << csv_cell(s.at("group")) << '"' << ','
          << csv_cell(s.at("order")) << ',' << csv_cell(s.at("K")) << ',' << csv_cell(s.at("alpha")) << ','
          << csv_cell(s.at("potential")) << ',' << csv_cell(s.at("codim")) << ',' << csv_cell(s.at("outcome"))
          << ',' << csv_cell(s.at("delta")) << '\n';
    }
  }
  return out.str();
}

namespace {

std::int64_t reduce(std::int64_t v, std::int64_t n) { return ((v % n) + n) % n; }

// A single number in a product group is read as a mixed-radix index.
Index element_from(const GroupSpec& g, const std::vector<std::int64_t>& coords) {
  if (coords.size() == 1 && g.rank() != 1) {
    const auto n = static_cast<std::int64_t>(g.order());
    return static_cast<Index>(reduce(coords[0], n));
  }
  if (coords.size() != g.rank()) {
    throw ShapeError("set literal: element has " + std::to_string(coords.size()) + " coordinates, group rank is " +
                     std::to_string(g.rank()));
  }
  std::vector<std::int64_t> c(coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = reduce(coords[i], g.factors()[i]);
  return g.encode(c);
}

std::int64_t parse_int(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  std::size_t j = s.size();
  while (j > i && std::isspace(static_cast<unsigned char>(s[j - 1]))) --j;
  const std::string t(s.substr(i, j - i));
  if (t.empty()) throw std::invalid_argument("set literal: empty number");
  const char* begin = t.data() + (t.size() > 1 && t[0] == '+' ? 1 : 0);
  std::int64_t v = 0;
  const auto [end, ec] = std::from_chars(begin, t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size()) throw std::invalid_argument("set literal: bad number '" + t + "'");
  return v;
}

}  // namespace

GroupSet parse_set(const GroupSpec& g, std::string_view literal) {
  std::string s(literal);
  const auto first = s.find_first_not_of(" \t");
  std::vector<Index> out;
  if (first == std::string::npos) return GroupSet(g, {});
  if (s[first] == '[') {
    const auto j = Json::parse(s);
    for (const auto& e : j) {
      if (e.is_array()) {
        out.push_back(element_from(g, e.get<std::vector<std::int64_t>>()));
      } else {
        out.push_back(element_from(g, {e.get<std::int64_t>()}));
      }
    }
  } else if (s[first] == '(') {
    std::size_t pos = first;
    while (pos < s.size()) {
      const auto open = s.find('(', pos);
      if (open == std::string::npos) break;
      const auto close = s.find(')', open);
      if (close == std::string::npos) throw std::invalid_argument("set literal: unbalanced parenthesis");
      std::vector<std::int64_t> coords;
      std::stringstream inner(s.substr(open + 1, close - open - 1));
      for (std::string part; std::getline(inner, part, ',');) coords.push_back(parse_int(part));
      out.push_back(element_from(g, coords));
      pos = close + 1;
    }
  } else {
    std::stringstream in(s);
    for (std::string part; std::getline(in, part, ',');) {
      const auto dots = part.find("..");
      if (dots != std::string::npos) {
        const auto lo = parse_int(std::string_view(part).substr(0, dots));
        const auto hi = parse_int(std::string_view(part).substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("set literal: empty range '" + part + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(element_from(g, {v}));
      } else {
        out.push_back(element_from(g, {parse_int(part)}));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return GroupSet(g, std::move(out));
}

}  // namespace addcomb
