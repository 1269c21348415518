#include "addcomb/dichotomy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace addcomb {

void LedgerConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("config: ") + name + " must be positive");
  };
  positive(c0, "c0");
  positive(c, "c");
  positive(C, "C");
  positive(gamma, "gamma");
  positive(C_RC, "C_RC");
  positive(packet_eps, "packet_eps");
  positive(C_pkt, "C_pkt");
  positive(regularity_c, "regularity_c");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("config: eps must lie in (0,1)");
  if (gamma < 2 * C + 4) throw std::invalid_argument("config: gamma must be at least 2C + 4");
  if (packet_eta && !(*packet_eta > 0.0 && *packet_eta < 1.0)) {
    throw std::invalid_argument("config: packet_eta must lie in (0,1)");
  }
  if (packet_retries < 1) throw std::invalid_argument("config: packet_retries must be at least 1");
  if (rho_grid < 2) throw std::invalid_argument("config: rho_grid must be at least 2");
}

LedgerConfig LedgerConfig::from_preset(std::string_view name) {
  LedgerConfig cfg;
  if (name == "ledger-C") return cfg;
  if (name == "ledger-S2") {
    cfg.preset = "ledger-S2";
    cfg.c0 = 0.26;
    cfg.c = 0.01;
    return cfg;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> LedgerConfig::preset_names() { return {"ledger-C", "ledger-S2"}; }

double LedgerConfig::packet_eta_for(double k) const {
  if (packet_eta) return *packet_eta;
  return std::min(0.5, std::pow(std::max(k, 1.0), -10.0));
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Concentrated:
      return "concentrated";
    case Regime::Gray:
      return "gray";
    case Regime::Dispersed:
      return "dispersed";
  }
  return "dispersed";
}

RegimeClass classify_beta(double beta, double k, double c) {
  RegimeClass r;
  r.beta = beta;
  r.k = k;
  const double leak = std::pow(k, -c);
  r.upper = 1.0 - leak;
  r.lower = 1.0 - 2.0 * leak;
  if (k < 2.0) {
    r.small_k = true;
    r.kind = Regime::Concentrated;
  } else if (beta >= r.upper - kBetaSlack) {
    r.kind = Regime::Concentrated;
  } else if (beta >= r.lower - kBetaSlack) {
    r.kind = Regime::Gray;
  } else {
    r.kind = Regime::Dispersed;
  }
  return r;
}

RegimeClass classify_regime(const FourierTable& t, double k, const DualSubgroup& v, const LedgerConfig& cfg) {
  if (k < 1.0) throw std::invalid_argument("classify_regime: doubling below 1");
  return classify_beta(concentration_beta(t, v).beta, k, cfg.c);
}

RegimeClass classify_regime(const GroupSet& a, const DualSubgroup& v, const LedgerConfig& cfg) {
  return classify_regime(transform(a), to_double(doubling_constant(a)), v, cfg);
}

std::vector<DualElement> tail_level_set(const FourierTable& t, const DualSubgroup& v, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("tail_level_set: lambda must be positive");
  const double cut = lambda - threshold_slack(lambda);
  std::vector<DualElement> out;
  for (DualElement xi = 0; xi < t.coeffs.size(); ++xi) {
    if (std::abs(t.coeffs[xi]) >= cut && !v.contains(xi)) out.push_back(xi);
  }
  return out;
}

E2DReport energy_to_doubling_check(const FourierTable& t, double alpha, DualElement xi) {
  if (xi == 0) throw std::invalid_argument("energy_to_doubling_check: the trivial character is excluded");
  if (xi >= t.coeffs.size()) throw ShapeError("energy_to_doubling_check: character outside the dual");
  E2DReport r;
  r.xi = xi;
  r.eta = alpha > 0 ? std::abs(t.coeffs[xi]) / alpha : 0.0;
  r.lhs = fourth_moment(t);
  const double a4 = alpha * alpha * alpha * alpha;
  r.rhs = a4 * (1.0 + std::pow(r.eta, 4));
  r.energy_boost = a4 > 0 ? r.lhs / a4 - 1.0 : 0.0;
  r.holds = r.lhs >= r.rhs * (1.0 - 1e-12) - 1e-300;
  return r;
}

E2DReport energy_to_doubling_check(const GroupSet& a, DualElement xi) {
  return energy_to_doubling_check(transform(a), to_double(a.density()), xi);
}

std::variant<Improvement, Undetermined> improvement_step(const ImprovementInput& in, const LedgerConfig& cfg) {
  if (!in.a || !in.table || !in.v) throw std::invalid_argument("improvement_step: missing input");
  if (in.regime == Regime::Concentrated) {
    throw std::invalid_argument("improvement_step: concentrated instances take the near-coset branch");
  }
  const GroupSet& a = *in.a;
  const FourierTable& t = *in.table;
  const auto& g = a.group();
  const double alpha = to_double(a.density());
  const double lambda = (in.regime == Regime::Gray ? 0.25 : 0.5) * in.tau * alpha;
  const auto tail = tail_level_set(t, *in.v, lambda);
  if (tail.empty()) return Undetermined{"no tail mass at lambda", std::nullopt, std::nullopt};

  const auto ext = dissociated_extraction_mod_V(t, tail, *in.v);
  Improvement imp;
  imp.v_prime = ext.v_prime;
  imp.v_prime_meets_v_trivially = ext.meets_v_trivially;
  imp.h_prime = annihilator(imp.v_prime);
  imp.map = quotient(g, imp.h_prime);
  imp.a_prime = imp.map.apply(a);
  imp.k_prime = doubling_constant(imp.a_prime);
  imp.delta = in.k - imp.k_prime;
  imp.witness = imp.v_prime.dissociated_basis->front();
  imp.witness_image = imp.map.descend_character(imp.witness).value();

  const auto tp = transform(imp.a_prime);
  const double alpha_p = to_double(imp.a_prime.density());
  const double kd = to_double(in.k);
  auto& d = imp.decrement;
  d.eta = std::abs(tp.coeffs[imp.witness_image]) / alpha_p;
  d.eta_lift = std::abs(t.coeffs[imp.witness]) / alpha;
  d.energy_boost = fourth_moment(tp) / std::pow(alpha_p, 4) - 1.0;
  d.delta = imp.delta;
  d.floor_ok = to_double(imp.delta) >= std::pow(kd, -cfg.C);
  d.e2d_ok = d.energy_boost >= std::pow(d.eta, 4) - 1e-9;
  imp.size_floor_ok =
      static_cast<double>(imp.a_prime.size()) >= std::pow(kd, -cfg.C) * static_cast<double>(a.size()) * (1 - 1e-12);

  if (imp.delta > Rational(0) && imp.size_floor_ok) return imp;
  std::string reason = imp.delta > Rational(0) ? "quotient image below the size floor" : "no measured decrement";
  return Undetermined{std::move(reason), std::nullopt, std::move(imp)};
}

std::variant<Improvement, Undetermined> improvement_step(const GroupSet& a, const DualSubgroup& v, Regime regime,
                                                         const LedgerConfig& cfg) {
  const auto t = transform(a);
  const Rational k = doubling_constant(a);
  ImprovementInput in{&a, &t, &v, regime, k, std::pow(to_double(k), -cfg.c0)};
  return improvement_step(in, cfg);
}

namespace {

double tight_exponent(double ratio, double k) {
  // Largest c with ratio <= K^-c.
  if (ratio <= 0.0) return std::numeric_limits<double>::infinity();
  if (k <= 1.0) return ratio <= 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return -std::log(ratio) / std::log(k);
}

}  // namespace

L4CompressionReport l4_compression_audit(const FourierTable& t, double alpha, double k, const LedgerConfig& cfg) {
  L4CompressionReport r;
  r.k = k;
  r.tau = std::pow(k, -cfg.c0);
  const double level = r.tau * alpha;
  const double cut = level - threshold_slack(level);
  for (DualElement xi = 0; xi < t.coeffs.size(); ++xi) {
    const double m2 = std::norm(t.coeffs[xi]);
    r.mass_total += m2 * m2;
    if (std::sqrt(m2) >= cut) {
      ++r.spectrum_size;
      r.mass_in_s += m2 * m2;
    } else {
      r.tail_lhs += m2 * m2;
    }
  }
  const double leak = std::pow(k, -cfg.c);
  r.compress_rhs = (1.0 - leak) * r.mass_total;
  r.compress_pass = r.mass_in_s >= r.compress_rhs - 1e-12 * r.mass_total;
  r.tight_c_compress = tight_exponent(r.mass_total > 0 ? r.tail_lhs / r.mass_total : 0.0, k);
  r.tail_rhs = leak * alpha * alpha;
  r.tail_pass = r.tail_lhs <= r.tail_rhs + 1e-15;
  r.tight_c_tail = tight_exponent(alpha > 0 ? r.tail_lhs / (alpha * alpha) : 0.0, k);
  return r;
}

L4CompressionReport l4_compression_audit(const GroupSet& a, const LedgerConfig& cfg) {
  if (a.empty()) throw std::invalid_argument("l4_compression_audit: empty set");
  return l4_compression_audit(transform(a), to_double(a.density()), to_double(doubling_constant(a)), cfg);
}

std::pair<GroupSet, Rational> exhaustive_best_subset(const GroupSet& a, std::size_t min_size) {
  const auto& m = a.members();
  if (m.size() > 16) throw BudgetError("exhaustive_best_subset: more than 16 elements");
  if (min_size == 0 || min_size > m.size()) throw std::invalid_argument("exhaustive_best_subset: bad minimum size");
  const auto& g = a.group();
  const std::uint32_t full = (1u << m.size()) - 1;
  std::optional<Rational> best;
  std::uint32_t best_mask = full;
  std::vector<char> hit(g.order());
  std::vector<Index> elems;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) < min_size) continue;
    elems.clear();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (mask >> i & 1u) elems.push_back(m[i]);
    }
    std::fill(hit.begin(), hit.end(), 0);
    std::int64_t count = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (std::size_t j = i; j < elems.size(); ++j) {
        auto& h = hit[g.add(elems[i], elems[j])];
        if (!h) {
          h = 1;
          ++count;
        }
      }
    }
    const Rational k(count, static_cast<std::int64_t>(elems.size()));
    if (!best || k < *best) {
      best = k;
      best_mask = mask;
    }
  }
  std::vector<Index> chosen;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (best_mask >> i & 1u) chosen.push_back(m[i]);
  }
  return {GroupSet(g, std::move(chosen)), *best};
}

BsgReport bsg_extract(const GroupSet& a, double beta_boost) {
  if (a.empty()) throw std::invalid_argument("bsg_extract: empty set");
  const auto& g = a.group();
  const auto counts = representation_counts(a);
  std::int64_t energy = 0;
  for (auto v : counts) energy += v * v;
  const double n = static_cast<double>(g.order());
  const double sz = static_cast<double>(a.size());
  BsgReport r;
  r.energy_boost = static_cast<double>(energy) * n / (sz * sz * sz * sz) - 1.0;
  if (r.energy_boost < beta_boost - 1e-12) {
    throw std::invalid_argument("bsg_extract: energy " + std::to_string(energy) + " gives boost " +
                                std::to_string(r.energy_boost) + " below the required " + std::to_string(beta_boost));
  }
  // Popular sums: r(s) at least half the r-weighted mean E / |A|^2.
  r.popularity_threshold = 0.5 * static_cast<double>(energy) / (sz * sz);
  std::vector<char> popular(g.order(), 0);
  for (Index s = 0; s < counts.size(); ++s) {
    if (counts[s] > 0 && static_cast<double>(counts[s]) >= r.popularity_threshold) {
      popular[s] = 1;
      ++r.popular_sums;
    }
  }
  const auto& m = a.members();
  std::vector<std::int64_t> part(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (Index b : m) {
      if (popular[g.add(m[i], b)]) ++part[i];
    }
  }
  auto sorted = part;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  r.median_participation =
      k % 2 ? static_cast<double>(sorted[k / 2]) : 0.5 * static_cast<double>(sorted[k / 2 - 1] + sorted[k / 2]);
  std::vector<Index> chosen;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (static_cast<double>(part[i]) >= 0.5 * r.median_participation) chosen.push_back(m[i]);
  }
  r.a0 = GroupSet(g, std::move(chosen));
  r.density_in_a = Rational(static_cast<std::int64_t>(r.a0.size()), static_cast<std::int64_t>(a.size()));
  r.doubling_a0 = doubling_constant(r.a0);
  if (a.size() <= 10) {
    auto [best, kb] = exhaustive_best_subset(a, r.a0.size());
    r.oracle_best = std::move(best);
    r.oracle_doubling = kb;
    r.within_factor_two = r.doubling_a0 <= Rational(2) * kb;
  }
  return r;
}

CosetCoverReport coset_cover(const GroupSet& a, const Subgroup& h, double exponent_c) {
  if (!(a.group() == h.parent)) throw ShapeError("coset_cover: subgroup lives in a different group");
  const auto& g = a.group();
  std::vector<char> seen(g.order(), 0);
  CosetCoverReport r;
  for (Index x : a.members()) {
    if (seen[x]) continue;
    Index least = x;
    for (Index w : h.elements) {
      const Index y = g.add(x, w);
      seen[y] = 1;
      least = std::min(least, y);
    }
    r.representatives.push_back(least);
  }
  std::sort(r.representatives.begin(), r.representatives.end());
  r.cosets = r.representatives.size();
  if (!a.empty()) {
    r.budget = std::pow(to_double(doubling_constant(a)), exponent_c);
    r.count_ok = static_cast<double>(r.cosets) <= r.budget + 1e-12;
    r.size_ok = static_cast<double>(h.size()) <= r.budget * static_cast<double>(a.size()) + 1e-9;
  }
  return r;
}

CoveringUpgradeReport covering_upgrade_audit(const GroupSet& a, const GroupSet& a0, double exponent_c) {
  if (a0.empty()) throw std::invalid_argument("covering_upgrade_audit: empty subset");
  for (Index x : a0.members()) {
    if (!a.contains(x)) throw std::invalid_argument("covering_upgrade_audit: A0 is not a subset of A");
  }
  CoveringUpgradeReport r;
  r.theta = Rational(static_cast<std::int64_t>(a0.size()), static_cast<std::int64_t>(a.size()));
  r.k0 = doubling_constant(a0);
  r.k = doubling_constant(a);
  const double base = to_double(r.k0) / to_double(r.theta);  // >= 1
  auto rhs = [base](double c) { return c * std::pow(base, c); };
  r.rhs = rhs(exponent_c);
  const double k = to_double(r.k);
  r.pass = k <= r.rhs + 1e-12;
  double lo = 0, hi = 1;
  while (rhs(hi) < k) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rhs(mid) >= k ? hi : lo) = mid;
  }
  r.tight_c = hi;
  return r;
}

const char* PSLOutcome::kind() const {
  if (std::holds_alternative<NearCoset>(result)) return "near-coset";
  if (std::holds_alternative<Improvement>(result)) return "improvement";
  return "undetermined";
}

PSLOutcome psl_step(const GroupSet& a, const LedgerConfig& cfg) {
  cfg.validate();
  if (a.empty()) throw std::invalid_argument("psl_step: empty set");
  const auto& g = a.group();
  const auto t = transform(a);
  PSLOutcome out;
  auto& art = out.artifacts;
  art.k = doubling_constant(a);
  const double kd = to_double(art.k);
  art.alpha = to_double(a.density());
  art.tau = std::pow(kd, -cfg.c0);
  art.spectrum = large_spectrum(t, art.alpha, art.tau);
  art.dissociated = extract_maximal_dissociated(g, art.spectrum);
  art.v = span(g, art.dissociated);
  art.h = annihilator(art.v);
  if (art.alpha < 1.0) art.chang = chang_audit(t, art.alpha, art.tau, cfg.C_RC);
  art.regime = classify_regime(t, kd, art.v, cfg);

  if (art.regime.kind == Regime::Concentrated) {
    art.pz = paley_zygmund_certificate(a, art.h, 1.0 - cfg.eps);
    art.s3_eps_limit = 0.5 * std::sqrt(art.regime.beta * art.pz->c1_ratio);
    auto nc = best_coset(a, art.h, cfg.C);
    if (to_double(nc.covered_fraction) >= 1.0 - cfg.eps - 1e-15) {
      out.result = std::move(nc);
    } else {
      out.result = Undetermined{"concentrated but the best coset covers " + to_string(nc.covered_fraction) +
                                    " of H, below 1 - eps",
                                std::move(nc), std::nullopt};
    }
    return out;
  }
  ImprovementInput in{&a, &t, &art.v, art.regime.kind, art.k, art.tau};
  std::visit([&out](auto&& r) { out.result = std::move(r); }, improvement_step(in, cfg));
  return out;
}

}  // namespace addcomb
