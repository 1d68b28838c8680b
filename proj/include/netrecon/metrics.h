#ifndef NETRECON_METRICS_H_
#define NETRECON_METRICS_H_

#include <map>
#include <utility>

#include "netrecon/graph.h"

namespace netrecon {

struct Contingency {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  Contingency& operator+=(const Contingency& other) {
    tp += other.tp;
    tn += other.tn;
    fp += other.fp;
    fn += other.fn;
    return *this;
  }
  bool operator==(const Contingency&) const = default;
};

// Binary classification of the universe [0, universe) by membership.
Contingency ContingencyOf(const VertexSet& truth, const VertexSet& predicted, int universe);

// Matthews correlation coefficient; 0 when any marginal is empty.
double Mcc(const Contingency& c);

// Supports keyed by (q, t), 0-based q.
using SupportRecords = std::map<std::pair<int, int>, VertexSet>;

// MCC over the concatenated indicators of every (q, t, i) with q in [0, n),
// 1 <= t <= up_to and i in [0, n). Throws ParameterError on missing records.
double CumulativeMcc(const SupportRecords& truth, const SupportRecords& predicted, int n,
                     int up_to);

}  // namespace netrecon

#endif  // NETRECON_METRICS_H_
