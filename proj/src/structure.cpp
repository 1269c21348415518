#include "addcomb/structure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace addcomb {

namespace {

constexpr Index kUnset = static_cast<Index>(-1);

// label[x] = least element of x + H.
std::vector<Index> coset_labels(const GroupSpec& g, const Subgroup& h) {
  std::vector<Index> label(g.order(), kUnset);
  for (Index x = 0; x < g.order(); ++x) {
    if (label[x] != kUnset) continue;
    for (Index w : h.elements) label[g.add(x, w)] = x;
  }
  return label;
}

std::vector<std::int64_t> coset_counts(const GroupSet& a, const std::vector<Index>& label) {
  std::vector<std::int64_t> count(label.size(), 0);
  for (Index x : a.members()) ++count[label[x]];
  return count;
}

void check_parent(const GroupSet& a, const Subgroup& h, const char* what) {
  if (!(a.group() == h.parent)) throw ShapeError(std::string(what) + ": subgroup lives in a different group");
}

}  // namespace

ProjectionSplit project(const GroupSet& a, const Subgroup& h) {
  check_parent(a, h, "project");
  const auto& g = a.group();
  const auto label = coset_labels(g, h);
  const auto count = coset_counts(a, label);
  ProjectionSplit s;
  s.h = h;
  s.v = dual_annihilator(h);
  s.low = DensityFunction::zero(g);
  s.high = DensityFunction::indicator(a);
  const double hs = static_cast<double>(h.size());
  for (Index x = 0; x < g.order(); ++x) {
    s.low.values[x] = static_cast<double>(count[label[x]]) / hs;
    s.high.values[x] -= s.low.values[x];
  }
  const auto tf = transform(a);
  const auto tl = dft(s.low);
  const auto th = dft(s.high);
  std::vector<char> in_v(g.order(), 0);
  for (auto xi : s.v.elements) in_v[xi] = 1;
  for (DualElement xi = 0; xi < g.order(); ++xi) {
    if (in_v[xi]) {
      s.high_support_residual = std::max(s.high_support_residual, std::abs(th.coeffs[xi]));
      s.low_transform_residual = std::max(s.low_transform_residual, std::abs(tl.coeffs[xi] - tf.coeffs[xi]));
    } else {
      s.low_support_residual = std::max(s.low_support_residual, std::abs(tl.coeffs[xi]));
      s.low_transform_residual = std::max(s.low_transform_residual, std::abs(tl.coeffs[xi]));
    }
  }
  return s;
}

ConcentrationRatio concentration_beta(const FourierTable& t, const DualSubgroup& v) {
  ConcentrationRatio r;
  r.mass_total = fourth_moment(t);
  for (auto xi : v.elements) {
    const double m2 = std::norm(t.coeffs[xi]);
    r.mass_in_v += m2 * m2;
  }
  r.beta = r.mass_total > 0 ? std::min(1.0, r.mass_in_v / r.mass_total) : 0.0;
  return r;
}

ConcentrationRatio concentration_beta(const GroupSet& a, const DualSubgroup& v) {
  if (a.empty()) throw std::invalid_argument("concentration_beta: empty set");
  return concentration_beta(transform(a), v);
}

NearCoset best_coset(const GroupSet& a, const Subgroup& h, double exponent_c) {
  check_parent(a, h, "best_coset");
  const auto label = coset_labels(a.group(), h);
  const auto count = coset_counts(a, label);
  NearCoset nc;
  nc.h = h;
  std::int64_t best = -1;
  for (Index x = 0; x < label.size(); ++x) {
    if (label[x] == x && count[x] > best) {
      best = count[x];
      nc.representative = x;
    }
  }
  nc.covered_fraction = Rational(best, static_cast<std::int64_t>(h.size()));
  if (!a.empty()) {
    const double k = to_double(doubling_constant(a));
    nc.size_bound_ok = static_cast<double>(h.size()) <= std::pow(k, exponent_c) * static_cast<double>(a.size());
  }
  return nc;
}

std::optional<NearCoset> find_near_coset(const GroupSet& a, const Subgroup& h, double eps, double exponent_c) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("find_near_coset: eps must lie in (0,1)");
  auto nc = best_coset(a, h, exponent_c);
  if (to_double(nc.covered_fraction) >= 1.0 - eps - 1e-15) return nc;
  return std::nullopt;
}

PaleyZygmundReport paley_zygmund_certificate(const GroupSet& a, const Subgroup& h, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("paley_zygmund_certificate: theta must lie in (0,1)");
  check_parent(a, h, "paley_zygmund_certificate");
  const auto& g = a.group();
  const auto label = coset_labels(g, h);
  const auto count = coset_counts(a, label);
  const double n = static_cast<double>(g.order());
  const double hs = static_cast<double>(h.size());
  PaleyZygmundReport r;
  r.theta = theta;
  r.mean = static_cast<double>(a.size()) / n;
  const double level = theta * r.mean;
  std::size_t above = 0;
  for (Index x = 0; x < g.order(); ++x) {
    const double gx = static_cast<double>(count[label[x]]) / hs;
    r.second_moment += gx * gx;
    if (gx >= level - 1e-12) ++above;
  }
  r.second_moment /= n;
  r.variance = r.second_moment - r.mean * r.mean;
  r.bound = r.second_moment > 0 ? (1 - theta) * (1 - theta) * r.mean * r.mean / r.second_moment : 0.0;
  r.true_probability = static_cast<double>(above) / n;
  r.c1_ratio = r.mean > 0 ? r.second_moment / (r.mean * r.mean) : 0.0;
  r.holds = r.true_probability >= r.bound - 1e-12;
  return r;
}

QuotientContext make_quotient_context(const GroupSpec& g, const Subgroup& h) {
  QuotientContext ctx;
  ctx.map = quotient(g, h);
  ctx.annihilator = dual_annihilator(h);
  ctx.descent.reserve(ctx.annihilator.size());
  for (auto xi : ctx.annihilator.elements) {
    auto zeta = ctx.map.descend_character(xi);
    if (!zeta) throw std::logic_error("make_quotient_context: annihilator character does not descend");
    ctx.descent.push_back(*zeta);
  }
  return ctx;
}

const char* to_string(LiftClass c) {
  switch (c) {
    case LiftClass::Saturated:
      return "saturated";
    case LiftClass::IndicatorDiscrepancy:
      return "indicator-discrepancy";
    case LiftClass::Unexpected:
      return "unexpected";
  }
  return "unexpected";
}

LiftCheckReport quotient_lift_check(const GroupSet& a, const FourierTable& t, const QuotientContext& ctx,
                                    bool keep_entries) {
  const auto& q = ctx.map;
  if (!(a.group() == q.parent)) throw ShapeError("quotient_lift_check: set lives in a different group");
  const auto& img = q.image;
  std::vector<double> fibre(img.order(), 0.0);
  for (Index x : a.members()) fibre[q.projection[x]] += 1.0;
  const double ks = static_cast<double>(q.kernel.size());

  DensityFunction averaged = DensityFunction::zero(img);
  DensityFunction image_indicator = DensityFunction::zero(img);
  LiftCheckReport r;
  r.saturated = true;
  for (Index y = 0; y < img.order(); ++y) {
    averaged.values[y] = fibre[y] / ks;
    image_indicator.values[y] = fibre[y] > 0 ? 1.0 : 0.0;
    if (fibre[y] != 0.0 && fibre[y] != ks) r.saturated = false;
  }
  const auto tb = dft(averaged);
  const auto tc = dft(image_indicator);
  r.characters = ctx.annihilator.size();
  for (std::size_t i = 0; i < ctx.annihilator.elements.size(); ++i) {
    const auto xi = ctx.annihilator.elements[i];
    const auto zeta = ctx.descent[i];
    const Complex a_val = t.coeffs[xi];
    const Complex b_val = tb.coeffs[zeta];
    const Complex c_val = tc.coeffs[zeta];
    r.max_ab_residual = std::max(r.max_ab_residual, std::abs(a_val - b_val));
    r.max_ac_residual = std::max(r.max_ac_residual, std::abs(a_val - c_val));
    if (keep_entries) r.entries.push_back({xi, zeta, a_val, b_val, c_val});
  }
  r.ab_holds = r.max_ab_residual <= kLiftTolerance;
  r.ac_holds = r.max_ac_residual <= kLiftTolerance;
  if (!r.ab_holds) {
    r.classification = LiftClass::Unexpected;
  } else if (r.saturated && r.ac_holds) {
    r.classification = LiftClass::Saturated;
  } else if (!r.saturated && !r.ac_holds) {
    r.classification = LiftClass::IndicatorDiscrepancy;
  } else {
    r.classification = LiftClass::Unexpected;
  }
  return r;
}

LiftCheckReport quotient_lift_check(const GroupSet& a, const Subgroup& h, bool keep_entries) {
  return quotient_lift_check(a, transform(a), make_quotient_context(a.group(), h), keep_entries);
}

}  // namespace addcomb
