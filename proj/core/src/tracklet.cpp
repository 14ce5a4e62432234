#include "mocap/tracklet.hpp"

#include "mocap/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

namespace mocap {
namespace {

struct UnionFind {
  std::vector<int> parent;
  std::vector<int> size;

  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)), size(static_cast<std::size_t>(n), 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }

  // Merges b's root under a's (or the reverse for balance); returns new root.
  int unite(int a, int b) {
    if (size[static_cast<std::size_t>(a)] < size[static_cast<std::size_t>(b)]) {
      std::swap(a, b);
    }
    parent[static_cast<std::size_t>(b)] = a;
    size[static_cast<std::size_t>(a)] += size[static_cast<std::size_t>(b)];
    return a;
  }
};

bool frames_disjoint(const std::set<int>& a, const std::set<int>& b) {
  const std::set<int>& small = a.size() <= b.size() ? a : b;
  const std::set<int>& large = a.size() <= b.size() ? b : a;
  for (int f : small) {
    if (large.count(f) != 0) {
      return false;
    }
  }
  return true;
}

} // namespace

EdgeWeight edge_weight(const Eigen::Vector3d& position_a, const Eigen::Vector3d& position_b,
                       const Eigen::VectorXd& feature_a, const Eigen::VectorXd& feature_b,
                       double lambda_fet) {
  if (feature_a.size() != feature_b.size()) {
    throw std::invalid_argument("feature dimensions differ");
  }
  if (lambda_fet < 0.0) {
    throw std::invalid_argument("lambda_fet must be non-negative");
  }
  EdgeWeight w;
  w.position_term = (position_a - position_b).norm();
  const double norm_a = feature_a.norm();
  const double norm_b = feature_b.norm();
  if (norm_a == 0.0 || norm_b == 0.0) {
    w.feature_term = 1.0;
    w.degenerate_feature = true;
  } else {
    double cosine = feature_a.dot(feature_b) / (norm_a * norm_b);
    cosine = std::clamp(cosine, -1.0, 1.0);
    w.feature_term = 1.0 - cosine;
  }
  w.total = w.position_term + lambda_fet * w.feature_term;
  return w;
}

MarkerGraph build_graph(std::span<const FramePointCloud> frames,
                        std::span<const Eigen::MatrixXd> features,
                        const GraphParams& params) {
  if (features.size() != frames.size()) {
    throw std::invalid_argument("features not aligned with frames");
  }
  if (params.max_frame_gap < 1) {
    throw std::invalid_argument("max_frame_gap must be at least 1");
  }
  if (params.th_pos < 0.0 || params.th_fet < 0.0) {
    throw std::invalid_argument("edge gates must be non-negative");
  }

  MarkerGraph graph;
  graph.frame_count = static_cast<int>(frames.size());
  std::vector<int> node_offset(frames.size() + 1, 0);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (f > 0 && frames[f].time_index <= frames[f - 1].time_index) {
      throw DataError("frames must have strictly increasing time_index");
    }
    const int count = static_cast<int>(frames[f].points.size());
    if (features[f].rows() != count) {
      throw std::invalid_argument("feature rows disagree with frame point count");
    }
    node_offset[f + 1] = node_offset[f] + count;
    for (int p = 0; p < count; ++p) {
      graph.nodes.push_back({static_cast<int>(f), p});
    }
  }

  for (std::size_t fa = 0; fa < frames.size(); ++fa) {
    for (std::size_t fb = fa + 1; fb < frames.size(); ++fb) {
      if (frames[fb].time_index - frames[fa].time_index > params.max_frame_gap) {
        break;
      }
      for (int pa = 0; pa < static_cast<int>(frames[fa].points.size()); ++pa) {
        for (int pb = 0; pb < static_cast<int>(frames[fb].points.size()); ++pb) {
          const EdgeWeight w = edge_weight(frames[fa].points[static_cast<std::size_t>(pa)],
                                           frames[fb].points[static_cast<std::size_t>(pb)],
                                           features[fa].row(pa).transpose(),
                                           features[fb].row(pb).transpose(), params.lambda_fet);
          if (w.position_term <= params.th_pos && w.feature_term <= params.th_fet) {
            graph.edges.push_back({node_offset[fa] + pa, node_offset[fb] + pb, w.total,
                                   w.position_term, w.feature_term});
          }
        }
      }
    }
  }
  return graph;
}

std::vector<Tracklet> greedy_cluster(const MarkerGraph& graph) {
  const int n = static_cast<int>(graph.nodes.size());
  UnionFind uf(n);
  std::vector<std::set<int>> cluster_frames(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cluster_frames[static_cast<std::size_t>(i)].insert(graph.nodes[static_cast<std::size_t>(i)].frame);
  }

  std::vector<int> order(graph.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    const GraphEdge& x = graph.edges[static_cast<std::size_t>(lhs)];
    const GraphEdge& y = graph.edges[static_cast<std::size_t>(rhs)];
    return std::tie(x.weight, x.a, x.b) < std::tie(y.weight, y.a, y.b);
  });

  for (int e : order) {
    const GraphEdge& edge = graph.edges[static_cast<std::size_t>(e)];
    int ra = uf.find(edge.a);
    int rb = uf.find(edge.b);
    if (ra == rb) {
      continue;
    }
    std::set<int>& fa = cluster_frames[static_cast<std::size_t>(ra)];
    std::set<int>& fb = cluster_frames[static_cast<std::size_t>(rb)];
    if (!frames_disjoint(fa, fb)) {
      continue;
    }
    const int merged = uf.unite(ra, rb);
    const int other = merged == ra ? rb : ra;
    cluster_frames[static_cast<std::size_t>(merged)].merge(cluster_frames[static_cast<std::size_t>(other)]);
  }

  std::vector<std::vector<GraphNode>> members(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    members[static_cast<std::size_t>(uf.find(i))].push_back(graph.nodes[static_cast<std::size_t>(i)]);
  }

  std::vector<Tracklet> tracklets;
  for (auto& group : members) {
    if (group.empty()) {
      continue;
    }
    // Node order already sorts by (frame, point); groups preserve it.
    Tracklet t;
    t.members = std::move(group);
    tracklets.push_back(std::move(t));
  }
  std::sort(tracklets.begin(), tracklets.end(), [](const Tracklet& a, const Tracklet& b) {
    return std::tie(a.members.front().frame, a.members.front().point) <
           std::tie(b.members.front().frame, b.members.front().point);
  });
  for (std::size_t i = 0; i < tracklets.size(); ++i) {
    tracklets[i].id = static_cast<int>(i);
  }
  return tracklets;
}

double tracklet_label_confidence(const Tracklet& tracklet,
                                 std::span<const ConfidenceMatrix> confidences,
                                 int label, double q) {
  if (tracklet.members.empty()) {
    throw std::invalid_argument("empty tracklet");
  }
  if (q < 0.0) {
    throw std::invalid_argument("q must be non-negative");
  }
  double sum = 0.0;
  int votes = 0;
  for (const GraphNode& m : tracklet.members) {
    if (m.frame < 0 || static_cast<std::size_t>(m.frame) >= confidences.size()) {
      throw std::invalid_argument("tracklet member frame outside confidence span");
    }
    const ConfidenceMatrix& c = confidences[static_cast<std::size_t>(m.frame)];
    if (m.point < 0 || m.point >= c.point_count) {
      throw std::invalid_argument("tracklet member point outside confidence matrix");
    }
    if (label < 0 || label > c.label_count) {
      throw std::invalid_argument("label index out of range");
    }
    if (q == 0.0) {
      Eigen::Index best = 0;
      c.scores.row(m.point).maxCoeff(&best);
      votes += static_cast<int>(best) == label ? 1 : 0;
    } else {
      sum += std::pow(std::abs(c.scores(m.point, label)), q);
    }
  }
  if (q == 0.0) {
    return static_cast<double>(votes);
  }
  return std::pow(sum, 1.0 / q);
}

std::vector<FrameLabeling> assign_tracklet_labels(std::span<const Tracklet> tracklets,
                                                  std::span<const ConfidenceMatrix> confidences,
                                                  double q) {
  if (confidences.empty()) {
    if (!tracklets.empty()) {
      throw std::invalid_argument("tracklets given without confidences");
    }
    return {};
  }
  const int label_count = confidences.front().label_count;
  for (const ConfidenceMatrix& c : confidences) {
    if (c.label_count != label_count) {
      throw std::invalid_argument("confidence matrices disagree on label count");
    }
  }

  const std::size_t tcount = tracklets.size();
  // Candidate labels per tracklet, best first; the dustbin competes as index
  // label_count and ends the list for that tracklet (null is always allowed).
  struct Candidate {
    double confidence;
    int label;
  };
  std::vector<std::vector<Candidate>> ranked(tcount);
  std::vector<std::vector<int>> frames_of(tcount);
  for (std::size_t t = 0; t < tcount; ++t) {
    ranked[t].reserve(static_cast<std::size_t>(label_count) + 1);
    for (int label = 0; label <= label_count; ++label) {
      ranked[t].push_back({tracklet_label_confidence(tracklets[t], confidences, label, q), label});
    }
    std::stable_sort(ranked[t].begin(), ranked[t].end(), [](const Candidate& a, const Candidate& b) {
      return a.confidence > b.confidence;
    });
    for (const GraphNode& m : tracklets[t].members) {
      frames_of[t].push_back(m.frame);
    }
  }

  struct QueueItem {
    double confidence;
    int tracklet;
    int rank;

    bool operator<(const QueueItem& other) const {
      // max-heap on confidence; ties prefer the earlier tracklet
      return std::tie(confidence, other.tracklet) < std::tie(other.confidence, tracklet);
    }
  };
  std::priority_queue<QueueItem> queue;
  for (std::size_t t = 0; t < tcount; ++t) {
    if (!ranked[t].empty()) {
      queue.push({ranked[t][0].confidence, static_cast<int>(t), 0});
    }
  }

  std::vector<int> assigned(tcount, -2); // -2 pending, -1 null, else label
  std::vector<std::vector<int>> holders(static_cast<std::size_t>(label_count));
  auto overlaps = [&](int ta, int tb) {
    const std::vector<int>& a = frames_of[static_cast<std::size_t>(ta)];
    const std::vector<int>& b = frames_of[static_cast<std::size_t>(tb)];
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) {
        return true;
      }
      if (a[i] < b[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    return false;
  };

  while (!queue.empty()) {
    const QueueItem item = queue.top();
    queue.pop();
    const std::size_t t = static_cast<std::size_t>(item.tracklet);
    if (assigned[t] != -2) {
      continue;
    }
    const Candidate& cand = ranked[t][static_cast<std::size_t>(item.rank)];
    if (cand.label == label_count) {
      assigned[t] = -1; // dustbin outranks remaining labels: whole tracklet null
      continue;
    }
    bool conflict = false;
    for (int holder : holders[static_cast<std::size_t>(cand.label)]) {
      if (overlaps(item.tracklet, holder)) {
        conflict = true;
        break;
      }
    }
    if (conflict) {
      const int next = item.rank + 1;
      if (next <= label_count) {
        queue.push({ranked[t][static_cast<std::size_t>(next)].confidence, item.tracklet, next});
      } else {
        assigned[t] = -1;
      }
      continue;
    }
    assigned[t] = cand.label;
    holders[static_cast<std::size_t>(cand.label)].push_back(item.tracklet);
  }

  std::vector<FrameLabeling> out(confidences.size());
  for (std::size_t f = 0; f < confidences.size(); ++f) {
    const std::size_t points = static_cast<std::size_t>(confidences[f].point_count);
    out[f].labels.assign(points, -1);
    out[f].confidences.assign(points, 0.0);
    for (std::size_t p = 0; p < points; ++p) {
      out[f].confidences[p] = confidences[f].scores(static_cast<Eigen::Index>(p), label_count);
    }
  }
  for (std::size_t t = 0; t < tcount; ++t) {
    const int label = assigned[t] == -2 ? -1 : assigned[t];
    for (const GraphNode& m : tracklets[t].members) {
      const std::size_t f = static_cast<std::size_t>(m.frame);
      const std::size_t p = static_cast<std::size_t>(m.point);
      if (p >= out[f].labels.size()) {
        throw std::invalid_argument("tracklet member outside frame point range");
      }
      if (label >= 0) {
        out[f].labels[p] = label;
        out[f].confidences[p] = confidences[f].scores(static_cast<Eigen::Index>(p), label);
      }
    }
  }
  return out;
}

FeatureSet baseline_features(std::span<const FramePointCloud> frames) {
  FeatureSet set;
  set.dimension = kBaselineFeatureDimension;
  set.per_frame.reserve(frames.size());
  for (const FramePointCloud& frame : frames) {
    const int n = static_cast<int>(frame.points.size());
    Eigen::MatrixXd rows(n, kBaselineFeatureDimension);
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const Eigen::Vector3d& p : frame.points) {
      centroid += p;
    }
    if (n > 0) {
      centroid /= static_cast<double>(n);
    }
    std::vector<double> dists;
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector3d& p = frame.points[static_cast<std::size_t>(i)];
      dists.clear();
      for (int j = 0; j < n; ++j) {
        if (j != i) {
          dists.push_back((p - frame.points[static_cast<std::size_t>(j)]).norm());
        }
      }
      std::sort(dists.begin(), dists.end());
      dists.resize(4, kMissingNeighborDistance);
      rows(i, 0) = dists[0];
      rows(i, 1) = dists[1];
      rows(i, 2) = dists[2];
      rows(i, 3) = dists[3];
      rows(i, 4) = p.y() - centroid.y();
      rows(i, 5) = (p - centroid).norm();
    }
    set.per_frame.push_back(std::move(rows));
  }
  return set;
}

} // namespace mocap
