#include "partcheck/device.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "partcheck/errors.hpp"
#include "partcheck/rng.hpp"

namespace partcheck {

Device Device::assemble(std::vector<Gene> genes, const std::vector<Promoter>& promoters,
                        const std::vector<WiringEntry>& wiring,
                        std::vector<std::string>* warnings) {
  if (genes.empty()) throw AssemblyError("device needs at least one gene");

  std::set<std::string> gene_ids;
  for (const auto& g : genes) {
    if (!(g.alpha > 0.0 && g.alpha < 1.0)) {
      throw ArgumentError("gene '" + g.id + "' alpha must lie in (0,1)");
    }
    if (!(g.conc_min < g.conc_max)) {
      throw ArgumentError("gene '" + g.id + "' needs conc_min < conc_max");
    }
    if (!gene_ids.insert(g.id).second) {
      throw AssemblyError("duplicate gene id '" + g.id + "'");
    }
  }

  Device d;
  d.genes_ = std::move(genes);

  auto promoter_by_id = [&](const std::string& id) -> const Promoter* {
    for (const auto& p : promoters) {
      if (p.id == id) return &p;
    }
    return nullptr;
  };

  d.promoters_.resize(d.genes_.size());
  std::vector<bool> wired(d.genes_.size(), false);
  std::set<std::string> used_promoters;
  for (const auto& w : wiring) {
    int axis = -1;
    for (int i = 0; i < d.size(); ++i) {
      if (d.genes_[i].id == w.gene) axis = i;
    }
    if (axis < 0) throw AssemblyError("wiring names unknown gene '" + w.gene + "'");
    if (wired[axis]) {
      throw AssemblyError("gene '" + w.gene + "' is wired to two promoters");
    }
    const Promoter* p = promoter_by_id(w.promoter);
    if (!p) throw AssemblyError("wiring names unknown promoter '" + w.promoter + "'");
    d.promoters_[axis] = *p;
    wired[axis] = true;
    used_promoters.insert(p->id);
  }
  for (int i = 0; i < d.size(); ++i) {
    if (!wired[i]) {
      throw AssemblyError("gene '" + d.genes_[i].id + "' has no promoter");
    }
  }
  if (warnings) {
    for (const auto& p : promoters) {
      if (!used_promoters.count(p.id)) {
        warnings->push_back("promoter '" + p.id + "' is not wired to any gene; ignored");
      }
    }
  }

  d.regulator_axis_.assign(d.size(), -1);
  for (int i = 0; i < d.size(); ++i) {
    const Promoter& p = d.promoters_[i];
    if (p.kind == PromoterKind::kConstitutive) continue;
    int raxis = -1;
    for (int j = 0; j < d.size(); ++j) {
      if (d.genes_[j].id == p.regulator) raxis = j;
    }
    if (raxis < 0) {
      throw AssemblyError("promoter '" + p.id + "' regulator '" + p.regulator +
                          "' is not a gene of the device");
    }
    d.regulator_axis_[i] = raxis;
    if (p.range.thresholds) {
      const auto& th = p.range.thresholds->values;
      const Gene& rg = d.genes_[raxis];
      double tol = kGeomEps * (1.0 + std::abs(rg.conc_max));
      if (std::abs(th.front() - rg.conc_min) > tol || std::abs(th.back() - rg.conc_max) > tol) {
        throw AssemblyError("promoter '" + p.id +
                            "' thresholds do not span the regulator's bounds");
      }
    }
  }

  d.a_ = Mat::Zero(d.size(), d.size());
  d.space_.lo = Vec(d.size());
  d.space_.hi = Vec(d.size());
  for (int i = 0; i < d.size(); ++i) {
    d.a_(i, i) = d.genes_[i].alpha;
    d.space_.lo[i] = d.genes_[i].conc_min;
    d.space_.hi[i] = d.genes_[i].conc_max;
  }
  return d;
}

int Device::gene_axis(const std::string& id) const {
  for (int i = 0; i < size(); ++i) {
    if (genes_[i].id == id) return i;
  }
  return -1;
}

bool Device::any_piecewise_linear() const {
  return std::any_of(promoters_.begin(), promoters_.end(), [](const Promoter& p) {
    return p.range.kind == FitKind::kPiecewiseLinear;
  });
}

int Device::resolve_promoter_interval(int axis, double regulator_value) const {
  const RangeMap& map = promoters_[axis].range;
  if (map.kind == FitKind::kConstant || !map.thresholds) return -1;
  const auto& th = map.thresholds->values;
  const int n = map.interval_count();
  double x = std::clamp(regulator_value, th.front(), th.back());
  int i = static_cast<int>(std::upper_bound(th.begin(), th.end(), x) - th.begin()) - 1;
  i = std::clamp(i, 0, n - 1);
  // A regulator sitting exactly on an interior threshold snaps to the
  // interval below it.
  if (i > 0 && x == th[i]) --i;
  return i;
}

Box Device::rate_set(const Vec& x, const RateContext* ctx) const {
  if (static_cast<int>(x.size()) != size()) throw ArgumentError("state dimension mismatch");
  if (!space_.contains(x)) {
    throw std::domain_error("state outside the feasible space");
  }
  Box b;
  b.lo = Vec(size());
  b.hi = Vec(size());
  for (int i = 0; i < size(); ++i) {
    const Promoter& p = promoters_[i];
    RateInterval iv;
    if (p.kind == PromoterKind::kConstitutive || p.range.kind == FitKind::kConstant) {
      iv = p.range.boxes[0];
    } else {
      double xr = x[regulator_axis_[i]];
      const auto& th = p.range.thresholds->values;
      double xc = std::clamp(xr, th.front(), th.back());
      int interval = ctx ? ctx->promoter_interval[i] : resolve_promoter_interval(i, xc);
      iv = slice(p.range, xc, interval);
    }
    b.lo[i] = iv.lo;
    b.hi[i] = iv.hi;
  }
  return b;
}

StepResult Device::step_sample(const Vec& x, std::mt19937_64& rng) const {
  Box rates = rate_set(x);
  Vec b(size());
  for (int i = 0; i < size(); ++i) b[i] = uniform_in(rng, rates.lo[i], rates.hi[i]);
  StepResult out;
  out.state = a_ * x + b;
  for (int i = 0; i < size(); ++i) {
    double clamped = std::clamp(out.state[i], space_.lo[i], space_.hi[i]);
    if (clamped != out.state[i]) {
      out.clamped = true;
      out.state[i] = clamped;
    }
  }
  return out;
}

}  // namespace partcheck
