#include "trb/cutting_plane_model.hpp"

#include <cmath>

namespace trb {

bool same_point(const Point& a, const Point& b, double tol) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

Bundle::Bundle(OracleSample first, TrustRegion region) : region_(std::move(region)) {
  if (first.dim() != region_.dim()) throw Error("bundle: dimension mismatch");
  if (!region_.contains(first.base)) throw Error("bundle: first sample outside the trust region");
  samples_.push_back(std::move(first));
}

bool Bundle::has_point(const Point& z) const {
  for (const auto& s : samples_) {
    if (same_point(s.base, z)) return true;
  }
  return false;
}

bool Bundle::add(OracleSample sample) {
  if (sample.dim() != region_.dim()) throw Error("bundle: dimension mismatch");
  if (sample.order != order()) throw Error("bundle: mixed model orders");
  if (!region_.contains(sample.base)) throw Error("bundle: sample outside the trust region");
  if (has_point(sample.base)) return false;
  samples_.push_back(std::move(sample));
  return true;
}

ModelValue model_eval(const Bundle& bundle, const Point& z) {
  const auto& s = bundle.samples();
  if (s.empty()) throw Error("model_eval: empty bundle");
  ModelValue best{taylor_eval(s[0], z), 0};
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double v = taylor_eval(s[k], z);
    if (v > best.value) best = {v, k};
  }
  return best;
}

double model_gap(const Bundle& bundle, const Oracle& oracle, const Point& z) {
  return oracle.value(z) - model_eval(bundle, z).value;
}

std::vector<CenteredCut> centered_cuts(const Bundle& bundle) {
  const Point& x = bundle.region().center();
  std::vector<CenteredCut> cuts;
  cuts.reserve(bundle.size());
  for (const auto& s : bundle.samples()) {
    const Vector e = x - s.base;
    CenteredCut cut{s.value + s.grad.dot(e), s.grad, std::nullopt};
    if (s.order >= 2) {
      const Vector He = *s.hess * e;
      cut.constant += 0.5 * e.dot(He);
      cut.linear += He;
      cut.hessian = *s.hess;
    }
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

PointMemory::PointMemory(std::size_t capacity) : capacity_(capacity) {}

void PointMemory::push(const OracleSample& sample) {
  if (capacity_ == 0) return;
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(sample);
}

Bundle seed_bundle(const PointMemory& memory, const OracleSample& center_sample,
                   const TrustRegion& region) {
  if (!same_point(center_sample.base, region.center(), 0.0)) {
    throw Error("seed_bundle: center sample must sit at the region center");
  }
  Bundle bundle(center_sample, region);
  for (const auto& s : memory.items()) {
    if (s.order != center_sample.order || s.dim() != region.dim()) continue;
    if (!region.contains(s.base)) continue;
    bundle.add(s);
  }
  return bundle;
}

}  // namespace trb
