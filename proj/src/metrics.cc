#include "netrecon/metrics.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "netrecon/errors.h"

namespace netrecon {

Contingency ContingencyOf(const VertexSet& truth, const VertexSet& predicted, int universe) {
  VertexSet t = truth;
  VertexSet p = predicted;
  std::sort(t.begin(), t.end());
  std::sort(p.begin(), p.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  auto in_range = [universe](int v) { return v >= 0 && v < universe; };
  if (!std::all_of(t.begin(), t.end(), in_range) || !std::all_of(p.begin(), p.end(), in_range)) {
    throw ParameterError("index outside the universe");
  }
  VertexSet both;
  std::set_intersection(t.begin(), t.end(), p.begin(), p.end(), std::back_inserter(both));
  Contingency c;
  c.tp = static_cast<long>(both.size());
  c.fp = static_cast<long>(p.size()) - c.tp;
  c.fn = static_cast<long>(t.size()) - c.tp;
  c.tn = universe - c.tp - c.fp - c.fn;
  return c;
}

double Mcc(const Contingency& c) {
  const double tp = static_cast<double>(c.tp);
  const double tn = static_cast<double>(c.tn);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

double CumulativeMcc(const SupportRecords& truth, const SupportRecords& predicted, int n,
                     int up_to) {
  Contingency total;
  for (int q = 0; q < n; ++q) {
    for (int t = 1; t <= up_to; ++t) {
      const auto ti = truth.find({q, t});
      const auto pi = predicted.find({q, t});
      if (ti == truth.end() || pi == predicted.end()) {
        throw ParameterError("missing support record for q=" + std::to_string(q + 1) +
                             ", t=" + std::to_string(t));
      }
      total += ContingencyOf(ti->second, pi->second, n);
    }
  }
  return Mcc(total);
}

}  // namespace netrecon
