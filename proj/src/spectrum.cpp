#include "addcomb/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace addcomb {

double threshold_slack(double level) { return 1e-12 + 1e-9 * std::abs(level); }

SpectrumSet large_spectrum(const FourierTable& t, double alpha, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("large_spectrum: tau must lie in (0,1]");
  SpectrumSet s;
  s.tau = tau;
  s.alpha = alpha;
  const double level = tau * alpha;
  const double cut = level - threshold_slack(level);
  for (DualElement xi = 0; xi < t.coeffs.size(); ++xi) {
    const double m = std::abs(t.coeffs[xi]);
    if (m >= cut) {
      s.members.push_back(xi);
      s.magnitudes.push_back(m);
    }
  }
  return s;
}

SpectrumSet large_spectrum(const GroupSet& a, double tau) {
  if (a.empty()) throw std::invalid_argument("large_spectrum: empty set");
  return large_spectrum(transform(a), to_double(a.density()), tau);
}

bool is_dissociated(const GroupSpec& g, std::span<const DualElement> set) {
  if (set.size() > kDissociationBudget) {
    throw BudgetError("is_dissociated: " + std::to_string(set.size()) + " elements exceed the budget of " +
                      std::to_string(kDissociationBudget));
  }
  std::vector<char> in_sums(g.order(), 0);
  std::vector<Index> sums{0};
  in_sums[0] = 1;
  for (DualElement xi : set) {
    if (xi >= g.order()) throw ShapeError("is_dissociated: element outside the dual");
    const std::size_t count = sums.size();
    for (std::size_t i = 0; i < count; ++i) {
      if (in_sums[g.add(sums[i], xi)]) return false;
    }
    for (std::size_t i = 0; i < count; ++i) {
      const Index s = g.add(sums[i], xi);
      in_sums[s] = 1;
      sums.push_back(s);
    }
  }
  return true;
}

namespace {

// Incremental subset-sum table for greedy dissociation over arbitrary labels.
template <typename Add>
class SubsetSums {
 public:
  SubsetSums(std::size_t universe, Add add) : in_(universe, 0), add_(add) {
    in_[0] = 1;
    sums_.push_back(0);
  }
  bool try_add(Index xi) {
    const std::size_t count = sums_.size();
    for (std::size_t i = 0; i < count; ++i) {
      if (in_[add_(sums_[i], xi)]) return false;
    }
    for (std::size_t i = 0; i < count; ++i) {
      const Index s = add_(sums_[i], xi);
      in_[s] = 1;
      sums_.push_back(s);
    }
    return true;
  }

 private:
  std::vector<char> in_;
  std::vector<Index> sums_;
  Add add_;
};

// Magnitudes are bucketed on a 1e-10 grid so that values equal up to rounding (xi and -xi) tie.
std::int64_t magnitude_key(double m) { return std::llround(m * 1e10); }

std::vector<std::size_t> order_by_magnitude(std::span<const DualElement> labels, std::span<const double> mags) {
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto ki = magnitude_key(mags[i]);
    const auto kj = magnitude_key(mags[j]);
    if (ki != kj) return ki > kj;
    return labels[i] < labels[j];
  });
  return order;
}

}  // namespace

std::vector<DualElement> extract_maximal_dissociated(const GroupSpec& g, std::span<const DualElement> candidates,
                                                     std::span<const double> magnitudes) {
  if (candidates.size() != magnitudes.size()) throw ShapeError("extract_maximal_dissociated: size mismatch");
  SubsetSums sums(g.order(), [&g](Index a, Index b) { return g.add(a, b); });
  std::vector<DualElement> d;
  for (std::size_t i : order_by_magnitude(candidates, magnitudes)) {
    const DualElement xi = candidates[i];
    if (xi == 0) continue;
    if (sums.try_add(xi)) d.push_back(xi);
  }
  return d;
}

std::vector<DualElement> extract_maximal_dissociated(const GroupSpec& g, const SpectrumSet& s) {
  return extract_maximal_dissociated(g, s.members, s.magnitudes);
}

std::size_t max_dissociated_exhaustive(const GroupSpec& g, std::span<const DualElement> candidates) {
  std::vector<DualElement> nonzero;
  for (auto xi : candidates) {
    if (xi != 0) nonzero.push_back(xi);
  }
  if (nonzero.size() > 16) throw BudgetError("max_dissociated_exhaustive: more than 16 candidates");
  std::size_t best = 0;
  // Depth-first over include/exclude with the subset-sum table carried along.
  struct Frame {
    std::vector<char> in;
    std::vector<Index> sums;
  };
  auto recurse = [&](auto&& self, std::size_t i, const Frame& f, std::size_t size) -> void {
    best = std::max(best, size);
    if (i == nonzero.size() || size + (nonzero.size() - i) <= best) return;
    const DualElement xi = nonzero[i];
    bool ok = true;
    for (Index s : f.sums) {
      if (f.in[g.add(s, xi)]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Frame next = f;
      for (Index s : f.sums) {
        const Index t = g.add(s, xi);
        next.in[t] = 1;
        next.sums.push_back(t);
      }
      self(self, i + 1, next, size + 1);
    }
    self(self, i + 1, f, size);
  };
  Frame root{std::vector<char>(g.order(), 0), {0}};
  root.in[0] = 1;
  recurse(recurse, 0, root, 0);
  return best;
}

DualSubgroup span(const GroupSpec& g, std::span<const DualElement> dissociated) {
  DualSubgroup v = enumerate_dual_subgroup(g, dissociated);
  v.dissociated_basis = std::vector<DualElement>(dissociated.begin(), dissociated.end());
  return v;
}

ChangReport chang_audit(const FourierTable& t, double alpha, double tau, double c_rc) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("chang_audit: tau must lie in (0,1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("chang_audit: density must lie strictly in (0,1)");
  ChangReport r;
  r.tau = tau;
  r.alpha = alpha;
  r.window_warning = alpha > 0.5;
  const double level = tau * alpha;
  std::vector<DualElement> members;
  std::vector<double> mags;
  for (DualElement xi = 0; xi < t.coeffs.size(); ++xi) {
    const double m = std::abs(t.coeffs[xi]);
    if (m >= level - threshold_slack(level)) {
      members.push_back(xi);
      mags.push_back(m);
    }
  }
  r.spectrum_size = members.size();
  r.dissociated = extract_maximal_dissociated(t.group, members, mags);
  r.dissociated_size = r.dissociated.size();
  const double log_inv = std::log(1.0 / alpha);
  r.bound_rhs = c_rc * std::log(1.0 / alpha) / (tau * tau);
  for (auto eta : r.dissociated) r.energy_lhs += std::norm(t.coeffs[eta]);
  r.energy_rhs = c_rc * alpha * alpha * log_inv;
  r.measured_constant = r.energy_lhs / (alpha * alpha * log_inv);
  r.size_constant = static_cast<double>(r.dissociated_size) * tau * tau / log_inv;
  r.pass = static_cast<double>(r.dissociated_size) <= r.bound_rhs;
  r.rc_pass = r.energy_lhs <= r.energy_rhs;
  const double chain_lhs = static_cast<double>(r.dissociated_size) * level * level;
  r.chain_ok = chain_lhs <= r.energy_lhs + threshold_slack(r.energy_lhs) * 4;
  const auto nonzero = static_cast<std::size_t>(std::count_if(members.begin(), members.end(), [](auto x) { return x != 0; }));
  if (nonzero <= 12) r.exhaustive_max = max_dissociated_exhaustive(t.group, members);
  return r;
}

ChangReport chang_audit(const GroupSet& a, double tau, double c_rc) {
  if (a.empty()) throw std::invalid_argument("chang_audit: empty set");
  return chang_audit(transform(a), to_double(a.density()), tau, c_rc);
}

ModVExtraction dissociated_extraction_mod_V(const FourierTable& t, std::span<const DualElement> tail,
                                            const DualSubgroup& v) {
  const auto& g = t.group;
  if (!(v.parent == g)) throw ShapeError("dissociated_extraction_mod_V: V lives in a different dual");
  for (auto xi : tail) {
    if (v.contains(xi)) {
      throw std::invalid_argument("dissociated_extraction_mod_V: tail element " + std::to_string(xi) + " lies in V");
    }
  }
  // label[x] = least element of x + V.
  constexpr Index unset = static_cast<Index>(-1);
  std::vector<Index> label(g.order(), unset);
  for (Index x = 0; x < g.order(); ++x) {
    if (label[x] != unset) continue;
    for (Index w : v.elements) label[g.add(x, w)] = x;
  }

  std::map<Index, std::pair<DualElement, double>> best;  // class label -> (representative, |f^|)
  for (auto xi : tail) {
    const double m = std::abs(t.coeffs[xi]);
    auto [it, fresh] = best.try_emplace(label[xi], xi, m);
    const auto km = magnitude_key(m);
    const auto kb = magnitude_key(it->second.second);
    if (!fresh && (km > kb || (km == kb && xi < it->second.first))) {
      it->second = {xi, m};
    }
  }
  std::vector<DualElement> class_labels, reps;
  std::vector<double> mags;
  for (const auto& [lab, rep] : best) {
    class_labels.push_back(lab);
    reps.push_back(rep.first);
    mags.push_back(rep.second);
  }

  SubsetSums sums(g.order(), [&](Index a, Index b) { return label[g.add(a, b)]; });
  ModVExtraction out;
  std::vector<DualElement> lifts;
  for (std::size_t i : order_by_magnitude(class_labels, mags)) {
    if (sums.try_add(class_labels[i])) {
      out.classes.push_back(class_labels[i]);
      lifts.push_back(reps[i]);
    }
  }
  out.v_prime = span(g, lifts);
  for (auto w : out.v_prime.elements) {
    if (v.contains(w)) out.intersection.push_back(w);
  }
  out.meets_v_trivially = out.intersection.size() == 1;
  return out;
}

}  // namespace addcomb
