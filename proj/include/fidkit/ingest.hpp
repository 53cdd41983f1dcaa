#ifndef FIDKIT_INGEST_HPP
#define FIDKIT_INGEST_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fidkit/fit.hpp"
#include "fidkit/sim.hpp"

namespace fidkit {

// One annotated fish in one frame, as exported by the annotation tool.
// Pixel centroids only; metric scale is an optional per-record input (from
// marker size), never inferred.
struct AnnotationRecord {
    std::string frame_id;
    double timestamp_s = 0.0;
    SampleLabel kind = SampleLabel::Transect;
    std::string transect_id;  // empty for Control records
    std::optional<double> altitude_m;
    double fish_x_px = 0.0;
    double fish_y_px = 0.0;
    double shelter_x_px = 0.0;
    double shelter_y_px = 0.0;
    std::optional<double> scale_m_per_px;
};

enum class AnnotationFormat { Csv, Json };
enum class DistanceUnit { Pixels, Meters };

std::string to_string(DistanceUnit unit);

// Canonical CSV header, exact and ordered. Empty fields encode absent
// optionals.
inline constexpr const char* kAnnotationCsvHeader =
    "frame_id,timestamp_s,kind,transect_id,altitude_m,fish_x_px,fish_y_px,"
    "shelter_x_px,shelter_y_px,scale_m_per_px";

// Group id used for control records that precede every transect.
inline constexpr const char* kBaselineGroupId = "__baseline__";

std::vector<AnnotationRecord> parse_annotations(std::istream& input,
                                                AnnotationFormat format);
void write_annotations(std::ostream& output,
                       std::span<const AnnotationRecord> records,
                       AnnotationFormat format);

// Samples derived from one site's annotations. samples[i] corresponds to
// records[i]; sample x is the time offset |timestamp - t_pass| relative to
// the owning transect's closest-approach frame (for controls, the most
// recent preceding transect).
struct SiteDataset {
    std::string site;
    std::vector<ObservationSample> samples;
    DistanceUnit unit = DistanceUnit::Pixels;
    std::vector<AnnotationRecord> records;
};

// Euclidean pixel distance x scale (when present on every record; mixed
// input is rejected). The closest-approach frame of a transect is the one
// at its median timestamp.
SiteDataset compute_distances(std::span<const AnnotationRecord> records,
                              const std::string& site = "");

// Distance-domain view of the dataset: x = altitude_m. Only closest-approach
// transect records qualify (the vehicle range elsewhere along the pass is
// not recoverable from annotations); control records use altitude_m
// directly, which by schema convention holds the idle vehicle's range to
// the shelter. Records without altitude_m are skipped.
std::vector<ObservationSample> distance_domain_samples(
    const SiteDataset& dataset);

struct FrameGroup {
    std::vector<std::size_t> transect_records;  // indices into dataset.records
    std::vector<std::size_t> control_records;
};

// Attaches each control record to the most recent preceding transect (by
// the transect's last timestamp); controls preceding all transects form the
// kBaselineGroupId group.
std::map<std::string, FrameGroup> group_frames(const SiteDataset& dataset);

// Renders simulated frames into the annotation schema (shelter at the
// origin, fish on the +x pixel axis, scale 1 m/px), so simulated data flows
// through the same pipeline as field data. Timestamps are laid out in
// per-transect blocks of (pass duration + wait).
std::vector<AnnotationRecord> annotations_from_frames(
    std::span<const SimFrame> frames, const ProtocolConfig& config);

nlohmann::ordered_json dataset_to_json(const SiteDataset& dataset);

}  // namespace fidkit

#endif
