#include "mocap/io.hpp"

#include "mocap/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace mocap {
namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary); // binary: no newline translation
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  return in;
}

json parse_document(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& err) {
    throw IoError(path.string() + ": " + err.what());
  }
  return doc;
}

// Runs `fn` over each parsed line; schema errors gain file/line context.
template <class Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& err) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + err.what());
    }
    try {
      fn(row);
    } catch (const json::exception& err) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + err.what());
    }
  }
}

template <class Fn>
auto with_schema_context(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& err) {
    throw DataError(path.string() + ": " + err.what());
  }
}

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw DataError("expected a 3-vector");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, int expected_cols = -1) {
  if (!j.is_array()) {
    throw DataError("expected an array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = expected_cols >= 0 ? expected_cols : -1;
  if (rows == 0) {
    return Eigen::MatrixXd(0, std::max<Eigen::Index>(cols, 0));
  }
  if (cols < 0) {
    cols = static_cast<Eigen::Index>(j[0].size());
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw DataError("ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

json rotation_to_json(const Eigen::Matrix3d& r) {
  json values = json::array();
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      values.push_back(r(row, col));
    }
  }
  return values;
}

Eigen::Matrix3d rotation_from_json(const json& j) {
  if (!j.is_array() || j.size() != 9) {
    throw DataError("expected 9 row-major rotation entries");
  }
  Eigen::Matrix3d r;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      r(row, col) = j[static_cast<std::size_t>(row * 3 + col)].get<double>();
    }
  }
  return r;
}

void write_document(const std::filesystem::path& path, const json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

void write_lines(const std::filesystem::path& path, const std::vector<json>& lines) {
  std::ofstream out = open_out(path);
  for (const json& line : lines) {
    out << line.dump() << '\n';
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

} // namespace

void save_skeleton(const std::filesystem::path& path, const Skeleton& skeleton) {
  json joints = json::array();
  for (const Joint& joint : skeleton.joints) {
    joints.push_back({{"name", joint.name},
                      {"parent", joint.parent},
                      {"offset", vec3_to_json(joint.offset)}});
  }
  write_document(path, json{{"joints", joints}});
}

Skeleton load_skeleton(const std::filesystem::path& path) {
  const json doc = parse_document(path);
  return with_schema_context(path, [&] {
    Skeleton skeleton;
    for (const json& j : doc.at("joints")) {
      skeleton.joints.push_back(
          {j.at("name").get<std::string>(), j.at("parent").get<int>(),
           vec3_from_json(j.at("offset"))});
    }
    validate(skeleton);
    return skeleton;
  });
}

void save_layout(const std::filesystem::path& path, const MarkerLayout& layout) {
  json markers = json::array();
  for (const Marker& m : layout.markers) {
    markers.push_back({{"label", m.label},
                       {"joint", m.joint},
                       {"local_offset", vec3_to_json(m.local_offset)},
                       {"part", to_string(m.part)}});
  }
  write_document(path, json{{"markers", markers}});
}

MarkerLayout load_layout(const std::filesystem::path& path) {
  const json doc = parse_document(path);
  return with_schema_context(path, [&] {
    MarkerLayout layout;
    for (const json& j : doc.at("markers")) {
      layout.markers.push_back({j.at("label").get<std::string>(), j.at("joint").get<int>(),
                                vec3_from_json(j.at("local_offset")),
                                part_from_string(j.at("part").get<std::string>())});
    }
    return layout;
  });
}

void save_motion(const std::filesystem::path& path, const Motion& motion) {
  json frames = json::array();
  for (const MotionFrame& frame : motion.frames) {
    json rotations = json::array();
    for (const Eigen::Matrix3d& r : frame.local_rotations) {
      rotations.push_back(rotation_to_json(r));
    }
    frames.push_back({{"root_translation", vec3_to_json(frame.root_translation)},
                      {"rotations", rotations}});
  }
  write_document(path, json{{"frame_rate", motion.frame_rate}, {"frames", frames}});
}

Motion load_motion(const std::filesystem::path& path) {
  const json doc = parse_document(path);
  return with_schema_context(path, [&] {
    Motion motion;
    motion.frame_rate = doc.at("frame_rate").get<double>();
    for (const json& f : doc.at("frames")) {
      MotionFrame frame;
      frame.root_translation = vec3_from_json(f.at("root_translation"));
      for (const json& r : f.at("rotations")) {
        frame.local_rotations.push_back(rotation_from_json(r));
      }
      motion.frames.push_back(std::move(frame));
    }
    return motion;
  });
}

void save_point_clouds(const std::filesystem::path& path,
                       std::span<const FramePointCloud> frames) {
  std::vector<json> lines;
  lines.reserve(frames.size());
  for (const FramePointCloud& frame : frames) {
    json points = json::array();
    for (const Eigen::Vector3d& p : frame.points) {
      points.push_back(vec3_to_json(p));
    }
    json parts = json::array();
    for (Part part : frame.part_tags) {
      parts.push_back(to_string(part));
    }
    lines.push_back({{"t", frame.time_index}, {"points", points}, {"parts", parts}});
  }
  write_lines(path, lines);
}

std::vector<FramePointCloud> load_point_clouds(const std::filesystem::path& path) {
  std::vector<FramePointCloud> frames;
  for_each_line(path, [&](const json& row) {
    FramePointCloud frame;
    frame.time_index = row.at("t").get<int>();
    for (const json& p : row.at("points")) {
      frame.points.push_back(vec3_from_json(p));
    }
    if (row.contains("parts")) {
      for (const json& p : row.at("parts")) {
        frame.part_tags.push_back(part_from_string(p.get<std::string>()));
      }
      if (frame.part_tags.size() != frame.points.size()) {
        throw DataError("parts not aligned with points");
      }
    } else {
      frame.part_tags.assign(frame.points.size(), Part::kUnknown);
    }
    frames.push_back(std::move(frame));
  });
  return frames;
}

void save_markers(const std::filesystem::path& path, const LabeledMarkers& markers) {
  std::vector<json> lines;
  lines.reserve(markers.positions.size());
  for (std::size_t f = 0; f < markers.positions.size(); ++f) {
    json positions = json::array();
    for (const Eigen::Vector3d& p : markers.positions[f]) {
      positions.push_back(vec3_to_json(p));
    }
    json visible = json::array();
    for (bool v :
         markers.visibility.empty() ? std::vector<bool>(markers.positions[f].size(), true)
                                    : markers.visibility[f]) {
      visible.push_back(v);
    }
    lines.push_back({{"t", static_cast<int>(f)}, {"positions", positions}, {"visible", visible}});
  }
  write_lines(path, lines);
}

LabeledMarkers load_markers(const std::filesystem::path& path) {
  LabeledMarkers markers;
  for_each_line(path, [&](const json& row) {
    std::vector<Eigen::Vector3d> positions;
    for (const json& p : row.at("positions")) {
      positions.push_back(vec3_from_json(p));
    }
    std::vector<bool> visible;
    for (const json& v : row.at("visible")) {
      visible.push_back(v.get<bool>());
    }
    if (visible.size() != positions.size()) {
      throw DataError("visibility not aligned with positions");
    }
    markers.positions.push_back(std::move(positions));
    markers.visibility.push_back(std::move(visible));
  });
  return markers;
}

void save_correspondence(const std::filesystem::path& path,
                         std::span<const std::vector<int>> correspondence) {
  std::vector<json> lines;
  lines.reserve(correspondence.size());
  for (std::size_t f = 0; f < correspondence.size(); ++f) {
    lines.push_back({{"t", static_cast<int>(f)}, {"origin", correspondence[f]}});
  }
  write_lines(path, lines);
}

std::vector<std::vector<int>> load_correspondence(const std::filesystem::path& path) {
  std::vector<std::vector<int>> correspondence;
  for_each_line(path, [&](const json& row) {
    correspondence.push_back(row.at("origin").get<std::vector<int>>());
  });
  return correspondence;
}

void save_score_frames(const std::filesystem::path& path,
                       std::span<const Eigen::MatrixXd> frames) {
  std::vector<json> lines;
  lines.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    lines.push_back({{"t", static_cast<int>(f)}, {"scores", matrix_to_json(frames[f])}});
  }
  write_lines(path, lines);
}

std::vector<Eigen::MatrixXd> load_score_frames(const std::filesystem::path& path) {
  std::vector<Eigen::MatrixXd> frames;
  for_each_line(path, [&](const json& row) {
    frames.push_back(matrix_from_json(row.at("scores")));
  });
  return frames;
}

void save_features(const std::filesystem::path& path, const FeatureSet& features) {
  std::vector<json> lines;
  lines.reserve(features.per_frame.size());
  for (std::size_t f = 0; f < features.per_frame.size(); ++f) {
    lines.push_back({{"t", static_cast<int>(f)}, {"features", matrix_to_json(features.per_frame[f])}});
  }
  write_lines(path, lines);
}

FeatureSet load_features(const std::filesystem::path& path) {
  FeatureSet set;
  set.dimension = -1;
  for_each_line(path, [&](const json& row) {
    Eigen::MatrixXd m = matrix_from_json(row.at("features"), set.dimension);
    if (set.dimension < 0 && m.rows() > 0) {
      set.dimension = static_cast<int>(m.cols());
    }
    set.per_frame.push_back(std::move(m));
  });
  if (set.dimension < 0) {
    set.dimension = 0;
  }
  return set;
}

void save_pose_estimates(const std::filesystem::path& path,
                         std::span<const PoseEstimate> estimates) {
  std::vector<json> lines;
  lines.reserve(estimates.size());
  for (std::size_t f = 0; f < estimates.size(); ++f) {
    const PoseEstimate& e = estimates[f];
    json positions = json::array();
    for (const Eigen::Vector3d& p : e.joint_positions) {
      positions.push_back(vec3_to_json(p));
    }
    json twists = json::array();
    for (double angle : e.twist_angles) {
      twists.push_back(json::array({std::cos(angle), std::sin(angle)}));
    }
    json offsets = json::array();
    for (const Eigen::Vector3d& o : e.frame_offsets) {
      offsets.push_back(vec3_to_json(o));
    }
    lines.push_back({{"t", static_cast<int>(f)},
                     {"positions", positions},
                     {"twist_cos_sin", twists},
                     {"offsets", offsets}});
  }
  write_lines(path, lines);
}

std::vector<PoseEstimate> load_pose_estimates(const std::filesystem::path& path) {
  std::vector<PoseEstimate> estimates;
  for_each_line(path, [&](const json& row) {
    PoseEstimate e;
    for (const json& p : row.at("positions")) {
      e.joint_positions.push_back(vec3_from_json(p));
    }
    for (const json& t : row.at("twist_cos_sin")) {
      if (!t.is_array() || t.size() != 2) {
        throw DataError("twist entries must be (cos, sin) pairs");
      }
      const double c = t[0].get<double>();
      const double s = t[1].get<double>();
      if (std::abs(std::hypot(c, s) - 1.0) > 1e-6) {
        throw DataError("twist (cos, sin) pair is not unit length");
      }
      e.twist_angles.push_back(std::atan2(s, c));
    }
    for (const json& o : row.at("offsets")) {
      e.frame_offsets.push_back(vec3_from_json(o));
    }
    if (e.twist_angles.size() != e.joint_positions.size() ||
        e.frame_offsets.size() != e.joint_positions.size()) {
      throw DataError("pose estimate arrays disagree in length");
    }
    estimates.push_back(std::move(e));
  });
  return estimates;
}

void save_labelings(const std::filesystem::path& path,
                    std::span<const FrameLabeling> labelings) {
  std::vector<json> lines;
  lines.reserve(labelings.size());
  for (std::size_t f = 0; f < labelings.size(); ++f) {
    lines.push_back({{"t", static_cast<int>(f)},
                     {"labels", labelings[f].labels},
                     {"confidences", labelings[f].confidences}});
  }
  write_lines(path, lines);
}

std::vector<FrameLabeling> load_labelings(const std::filesystem::path& path) {
  std::vector<FrameLabeling> labelings;
  for_each_line(path, [&](const json& row) {
    FrameLabeling l;
    l.labels = row.at("labels").get<std::vector<int>>();
    l.confidences = row.at("confidences").get<std::vector<double>>();
    if (l.labels.size() != l.confidences.size()) {
      throw DataError("labels not aligned with confidences");
    }
    labelings.push_back(std::move(l));
  });
  return labelings;
}

void save_tracklets(const std::filesystem::path& path, std::span<const TrackletRecord> records) {
  std::vector<json> lines;
  lines.reserve(records.size());
  for (const TrackletRecord& r : records) {
    json members = json::array();
    for (const std::array<int, 2>& m : r.members) {
      members.push_back(json::array({m[0], m[1]}));
    }
    lines.push_back({{"id", r.id},
                     {"members", members},
                     {"label", r.label},
                     {"confidence", r.confidence}});
  }
  write_lines(path, lines);
}

std::vector<TrackletRecord> load_tracklets(const std::filesystem::path& path) {
  std::vector<TrackletRecord> records;
  for_each_line(path, [&](const json& row) {
    TrackletRecord r;
    r.id = row.at("id").get<int>();
    for (const json& m : row.at("members")) {
      if (!m.is_array() || m.size() != 2) {
        throw DataError("tracklet members must be (frame, point) pairs");
      }
      r.members.push_back({m[0].get<int>(), m[1].get<int>()});
    }
    r.label = row.at("label").get<int>();
    r.confidence = row.at("confidence").get<double>();
    records.push_back(std::move(r));
  });
  return records;
}

namespace {

json counts_to_json(const ConfusionCounts& c) {
  return {{"hits", c.hits},
          {"swaps", c.swaps},
          {"false_nulls", c.false_nulls},
          {"ghosts_accepted", c.ghosts_accepted},
          {"ghosts_rejected", c.ghosts_rejected},
          {"total", c.total()}};
}

} // namespace

void save_report(const std::filesystem::path& path, const LabelingReport& report) {
  json per_part = json::object();
  for (const auto& [part, scores] : report.per_part) {
    per_part[to_string(part)] = {{"f1", scores.f1},
                                 {"precision", scores.precision},
                                 {"recall", scores.recall},
                                 {"accuracy", scores.accuracy},
                                 {"counts", counts_to_json(scores.counts)}};
  }
  write_document(path, json{{"f1", report.f1},
                            {"precision", report.precision},
                            {"recall", report.recall},
                            {"accuracy", report.accuracy},
                            {"accuracy_excluding_ghosts", report.accuracy_excluding_ghosts},
                            {"counts", counts_to_json(report.counts)},
                            {"per_part", per_part}});
}

void save_report(const std::filesystem::path& path, const SolvingReport& report,
                 const Skeleton& skeleton) {
  json per_joint = json::array();
  for (std::size_t j = 0; j < report.per_joint_mpjpe_cm.size(); ++j) {
    per_joint.push_back({{"joint", j < skeleton.joints.size() ? skeleton.joints[j].name : "?"},
                         {"mpjpe_cm", report.per_joint_mpjpe_cm[j]},
                         {"mpjre_deg", report.per_joint_mpjre_deg[j]}});
  }
  write_document(path, json{{"mpjpe_cm", report.mpjpe_cm},
                            {"mpjre_deg", report.mpjre_deg},
                            {"leaves_excluded", report.leaves_excluded},
                            {"per_joint", per_joint}});
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

} // namespace mocap
