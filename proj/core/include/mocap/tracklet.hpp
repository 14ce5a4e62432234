#pragma once

#include "mocap/assignment.hpp"
#include "mocap/types.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace mocap {

/// One detection inside a window: frame is the index into the window's frame
/// span, point the index into that frame's point list.
struct GraphNode {
  int frame = 0;
  int point = 0;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  int a = 0; // node indices, ordered so node a precedes node b
  int b = 0;
  double weight = 0.0;
  double position_term = 0.0;
  double feature_term = 0.0;
};

struct MarkerGraph {
  std::vector<GraphNode> nodes; // sorted by (frame, point)
  std::vector<GraphEdge> edges;
  int frame_count = 0;
};

struct Tracklet {
  int id = 0;
  std::vector<GraphNode> members; // sorted by frame; at most one per frame
};

/// Per-frame feature rows, aligned with the points of the matching frame.
struct FeatureSet {
  int dimension = 0;
  std::vector<Eigen::MatrixXd> per_frame; // rows = points, cols = dimension
};

struct EdgeWeight {
  double total = 0.0;
  double position_term = 0.0; // euclidean distance
  double feature_term = 0.0;  // 1 - cosine similarity in [0, 2]
  bool degenerate_feature = false;
};

/// Combined weight lambda-blending position distance against cosine feature
/// distance. A zero feature vector on either side has no direction to compare,
/// so the cosine is taken as 0 (feature distance 1) and the result flagged.
EdgeWeight edge_weight(const Eigen::Vector3d& position_a, const Eigen::Vector3d& position_b,
                       const Eigen::VectorXd& feature_a, const Eigen::VectorXd& feature_b,
                       double lambda_fet);

struct GraphParams {
  double lambda_fet = 0.1;
  double th_pos = 0.05; // meters
  double th_fet = 0.5;  // cosine distance
  int max_frame_gap = 3;
};

/// Connects detections of distinct frames at most max_frame_gap time steps
/// apart, keeping only edges that pass both the position and the feature
/// gate. `features` must be aligned with `frames`, which must have strictly
/// increasing time_index.
MarkerGraph build_graph(std::span<const FramePointCloud> frames,
                        std::span<const Eigen::MatrixXd> features,
                        const GraphParams& params);

/// Union-find merge of graph components in ascending edge-weight order,
/// skipping any merge that would place two nodes of one frame in the same
/// cluster. Every node ends in exactly one tracklet (isolated nodes become
/// singletons). Deterministic: ties break on node order.
std::vector<Tracklet> greedy_cluster(const MarkerGraph& graph);

/// Generalized-mean aggregation of a label's per-member confidences:
/// (sum |c|^q)^(1/q) for q > 0. q = 0 switches to voting and returns the
/// number of members whose best row entry (dustbin included) is `label`;
/// pass label = label_count to count dustbin votes.
double tracklet_label_confidence(const Tracklet& tracklet,
                                 std::span<const ConfidenceMatrix> confidences,
                                 int label, double q);

/// Assigns each tracklet its best aggregate label, greedily by descending
/// aggregate confidence. Tracklets that overlap in time never share a label;
/// a tracklet whose remaining candidates are exhausted, or whose best
/// candidate is the dustbin, goes null as a whole. Returns per-frame
/// labelings aligned with `confidences`.
std::vector<FrameLabeling> assign_tracklet_labels(std::span<const Tracklet> tracklets,
                                                  std::span<const ConfidenceMatrix> confidences,
                                                  double q);

/// Padding distance used when a frame has fewer than five points, so the
/// nearest-neighbor block of the baseline descriptor keeps its shape.
inline constexpr double kMissingNeighborDistance = 10.0; // meters

inline constexpr int kBaselineFeatureDimension = 6;

/// Cheap geometric descriptor per detection: the four smallest distances to
/// other points of the same frame (ascending, padded), height above the
/// frame centroid, and distance from the centroid.
FeatureSet baseline_features(std::span<const FramePointCloud> frames);

} // namespace mocap
