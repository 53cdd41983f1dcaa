#include "fidkit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "fidkit/errors.hpp"

namespace fidkit {

std::string to_string(DistanceUnit unit) {
    return unit == DistanceUnit::Pixels ? "pixels" : "meters";
}

namespace {

const std::vector<std::string> kRequiredColumns = {
    "frame_id",     "timestamp_s",  "kind",
    "transect_id",  "altitude_m",   "fish_x_px",
    "fish_y_px",    "shelter_x_px", "shelter_y_px",
    "scale_m_per_px"};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

double parse_double(const std::string& text, std::size_t row,
                    const std::string& field) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("row " + std::to_string(row) + ", field '" + field +
                         "': not a number: '" + text + "'");
    return value;
}

std::string format_double(double value) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

void validate_record(const AnnotationRecord& r, std::size_t row) {
    if (r.timestamp_s < 0.0)
        throw ParseError("row " + std::to_string(row) +
                         ", field 'timestamp_s': must be >= 0");
    if (r.altitude_m && *r.altitude_m < 0.0)
        throw ParseError("row " + std::to_string(row) +
                         ", field 'altitude_m': must be >= 0");
    if (r.scale_m_per_px && !(*r.scale_m_per_px > 0.0))
        throw ParseError("row " + std::to_string(row) +
                         ", field 'scale_m_per_px': must be > 0");
    if (r.kind == SampleLabel::Transect && r.transect_id.empty())
        throw ParseError("row " + std::to_string(row) +
                         ", field 'transect_id': required for transect rows");
}

std::vector<AnnotationRecord> parse_csv(std::istream& input) {
    std::string line;
    if (!std::getline(input, line))
        throw SchemaError("missing header line");
    const auto header = split_csv_line(line);
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
    for (const auto& name : kRequiredColumns)
        if (!column.count(name))
            throw SchemaError("missing required column '" + name + "'");

    std::vector<AnnotationRecord> records;
    std::size_t row = 1;
    while (std::getline(input, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < header.size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        auto field = [&](const std::string& name) -> const std::string& {
            return fields[column.at(name)];
        };
        AnnotationRecord r;
        r.frame_id = field("frame_id");
        r.timestamp_s = parse_double(field("timestamp_s"), row, "timestamp_s");
        try {
            r.kind = sample_label_from_string(field("kind"));
        } catch (const ParseError&) {
            throw ParseError("row " + std::to_string(row) +
                             ", field 'kind': expected control|transect");
        }
        r.transect_id = field("transect_id");
        if (!field("altitude_m").empty())
            r.altitude_m = parse_double(field("altitude_m"), row, "altitude_m");
        r.fish_x_px = parse_double(field("fish_x_px"), row, "fish_x_px");
        r.fish_y_px = parse_double(field("fish_y_px"), row, "fish_y_px");
        r.shelter_x_px =
            parse_double(field("shelter_x_px"), row, "shelter_x_px");
        r.shelter_y_px =
            parse_double(field("shelter_y_px"), row, "shelter_y_px");
        if (!field("scale_m_per_px").empty())
            r.scale_m_per_px =
                parse_double(field("scale_m_per_px"), row, "scale_m_per_px");
        validate_record(r, row);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<AnnotationRecord> parse_json(std::istream& input) {
    nlohmann::json j;
    try {
        input >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("annotation JSON: ") + e.what());
    }
    if (!j.is_array()) throw SchemaError("annotation JSON must be an array");
    std::vector<AnnotationRecord> records;
    std::size_t row = 0;
    for (const auto& item : j) {
        ++row;
        AnnotationRecord r;
        try {
            r.frame_id = item.at("frame_id").get<std::string>();
            r.timestamp_s = item.at("timestamp_s").get<double>();
            r.kind = sample_label_from_string(item.at("kind").get<std::string>());
            r.transect_id = item.value("transect_id", std::string());
            if (item.contains("altitude_m") && !item["altitude_m"].is_null())
                r.altitude_m = item["altitude_m"].get<double>();
            r.fish_x_px = item.at("fish_x_px").get<double>();
            r.fish_y_px = item.at("fish_y_px").get<double>();
            r.shelter_x_px = item.at("shelter_x_px").get<double>();
            r.shelter_y_px = item.at("shelter_y_px").get<double>();
            if (item.contains("scale_m_per_px") &&
                !item["scale_m_per_px"].is_null())
                r.scale_m_per_px = item["scale_m_per_px"].get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("record " + std::to_string(row) + ": " + e.what());
        }
        validate_record(r, row);
        records.push_back(std::move(r));
    }
    return records;
}

// Closest-approach timestamp per transect id: the median (middle element)
// of that transect's sorted timestamps, so it always lands on a real frame.
std::map<std::string, double> pass_times(
    std::span<const AnnotationRecord> records) {
    std::map<std::string, std::vector<double>> stamps;
    for (const auto& r : records)
        if (r.kind == SampleLabel::Transect)
            stamps[r.transect_id].push_back(r.timestamp_s);
    std::map<std::string, double> out;
    for (auto& [id, ts] : stamps) {
        std::sort(ts.begin(), ts.end());
        out[id] = ts[(ts.size() - 1) / 2];
    }
    return out;
}

std::map<std::string, double> last_timestamps(
    std::span<const AnnotationRecord> records) {
    std::map<std::string, double> out;
    for (const auto& r : records)
        if (r.kind == SampleLabel::Transect) {
            auto [it, inserted] = out.try_emplace(r.transect_id, r.timestamp_s);
            if (!inserted) it->second = std::max(it->second, r.timestamp_s);
        }
    return out;
}

// Most recent preceding transect for a control timestamp, or empty when the
// control precedes every transect.
std::string owning_transect(const std::map<std::string, double>& last_ts,
                            double control_ts) {
    std::string best;
    double best_ts = -std::numeric_limits<double>::infinity();
    for (const auto& [id, ts] : last_ts)
        if (ts <= control_ts && ts > best_ts) {
            best = id;
            best_ts = ts;
        }
    return best;
}

}  // namespace

std::vector<AnnotationRecord> parse_annotations(std::istream& input,
                                                AnnotationFormat format) {
    return format == AnnotationFormat::Csv ? parse_csv(input)
                                           : parse_json(input);
}

void write_annotations(std::ostream& output,
                       std::span<const AnnotationRecord> records,
                       AnnotationFormat format) {
    if (format == AnnotationFormat::Csv) {
        output << kAnnotationCsvHeader << '\n';
        for (const auto& r : records) {
            output << r.frame_id << ',' << format_double(r.timestamp_s) << ','
                   << to_string(r.kind) << ',' << r.transect_id << ','
                   << (r.altitude_m ? format_double(*r.altitude_m) : "") << ','
                   << format_double(r.fish_x_px) << ','
                   << format_double(r.fish_y_px) << ','
                   << format_double(r.shelter_x_px) << ','
                   << format_double(r.shelter_y_px) << ','
                   << (r.scale_m_per_px ? format_double(*r.scale_m_per_px)
                                        : "")
                   << '\n';
        }
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json item;
        item["frame_id"] = r.frame_id;
        item["timestamp_s"] = r.timestamp_s;
        item["kind"] = to_string(r.kind);
        item["transect_id"] = r.transect_id;
        item["altitude_m"] =
            r.altitude_m ? nlohmann::ordered_json(*r.altitude_m) : nullptr;
        item["fish_x_px"] = r.fish_x_px;
        item["fish_y_px"] = r.fish_y_px;
        item["shelter_x_px"] = r.shelter_x_px;
        item["shelter_y_px"] = r.shelter_y_px;
        item["scale_m_per_px"] = r.scale_m_per_px
                                     ? nlohmann::ordered_json(*r.scale_m_per_px)
                                     : nullptr;
        arr.push_back(std::move(item));
    }
    output << arr.dump(2) << '\n';
}

SiteDataset compute_distances(std::span<const AnnotationRecord> records,
                              const std::string& site) {
    if (records.empty()) throw EmptyInput("no annotation records");
    const bool scaled = records.front().scale_m_per_px.has_value();
    for (const auto& r : records)
        if (r.scale_m_per_px.has_value() != scaled)
            throw MixedUnits("scale_m_per_px must be present on all records "
                             "or on none");

    const auto t_pass = pass_times(records);
    const auto last_ts = last_timestamps(records);
    const double first_pass =
        t_pass.empty() ? 0.0
                       : std::min_element(t_pass.begin(), t_pass.end(),
                                          [](const auto& a, const auto& b) {
                                              return a.second < b.second;
                                          })
                             ->second;

    SiteDataset dataset;
    dataset.site = site;
    dataset.unit = scaled ? DistanceUnit::Meters : DistanceUnit::Pixels;
    dataset.records.assign(records.begin(), records.end());
    dataset.samples.reserve(records.size());
    for (const auto& r : records) {
        const double px =
            std::hypot(r.fish_x_px - r.shelter_x_px, r.fish_y_px - r.shelter_y_px);
        const double distance = scaled ? px * *r.scale_m_per_px : px;
        double reference;
        if (r.kind == SampleLabel::Transect) {
            reference = t_pass.at(r.transect_id);
        } else {
            const std::string owner = owning_transect(last_ts, r.timestamp_s);
            reference = owner.empty() ? first_pass : t_pass.at(owner);
        }
        dataset.samples.push_back(
            {std::abs(r.timestamp_s - reference), distance, r.kind, 1.0});
    }
    return dataset;
}

std::vector<ObservationSample> distance_domain_samples(
    const SiteDataset& dataset) {
    const auto t_pass = pass_times(dataset.records);
    // Per transect, the minimal |timestamp - t_pass| identifies the
    // closest-approach frame(s).
    std::map<std::string, double> min_offset;
    for (const auto& r : dataset.records)
        if (r.kind == SampleLabel::Transect) {
            const double off = std::abs(r.timestamp_s - t_pass.at(r.transect_id));
            auto [it, inserted] = min_offset.try_emplace(r.transect_id, off);
            if (!inserted) it->second = std::min(it->second, off);
        }

    std::vector<ObservationSample> samples;
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const auto& r = dataset.records[i];
        if (!r.altitude_m) continue;
        if (r.kind == SampleLabel::Transect) {
            const double off = std::abs(r.timestamp_s - t_pass.at(r.transect_id));
            if (off > min_offset.at(r.transect_id) + 1e-9) continue;
        }
        samples.push_back({*r.altitude_m, dataset.samples[i].distance, r.kind,
                           dataset.samples[i].weight});
    }
    return samples;
}

std::map<std::string, FrameGroup> group_frames(const SiteDataset& dataset) {
    if (dataset.records.empty()) throw EmptyInput("empty dataset");
    const auto last_ts = last_timestamps(dataset.records);
    std::map<std::string, FrameGroup> groups;
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const auto& r = dataset.records[i];
        if (r.kind == SampleLabel::Transect) {
            groups[r.transect_id].transect_records.push_back(i);
        } else {
            const std::string owner = owning_transect(last_ts, r.timestamp_s);
            groups[owner.empty() ? kBaselineGroupId : owner]
                .control_records.push_back(i);
        }
    }
    return groups;
}

std::vector<AnnotationRecord> annotations_from_frames(
    std::span<const SimFrame> frames, const ProtocolConfig& config) {
    const double block_length =
        2.0 * config.transect_half_length / config.speed + config.wait_seconds;
    std::vector<AnnotationRecord> records;
    std::size_t counter = 0;
    for (const auto& frame : frames) {
        const double timestamp =
            frame.transect_index * block_length + frame.t;
        for (double d : frame.fish_distances) {
            AnnotationRecord r;
            {
                std::ostringstream id;
                id << 'f' << counter;
                r.frame_id = id.str();
            }
            ++counter;
            r.timestamp_s = timestamp;
            r.kind = frame.label;
            if (frame.label == SampleLabel::Transect) {
                r.transect_id = "t" + std::to_string(frame.transect_index);
                r.altitude_m = frame.altitude;
            } else {
                // For idle (control) rows the altitude column records the
                // vehicle's range to the shelter, since "height above the
                // marker" is not the operative quantity while standing off.
                r.altitude_m = frame.robot_distance;
            }
            r.fish_x_px = d;
            r.fish_y_px = 0.0;
            r.shelter_x_px = 0.0;
            r.shelter_y_px = 0.0;
            r.scale_m_per_px = 1.0;
            records.push_back(std::move(r));
        }
    }
    return records;
}

nlohmann::ordered_json dataset_to_json(const SiteDataset& dataset) {
    const auto t_pass = pass_times(dataset.records);
    std::map<std::string, double> min_offset;
    for (const auto& r : dataset.records)
        if (r.kind == SampleLabel::Transect) {
            const double off = std::abs(r.timestamp_s - t_pass.at(r.transect_id));
            auto [it, inserted] = min_offset.try_emplace(r.transect_id, off);
            if (!inserted) it->second = std::min(it->second, off);
        }

    nlohmann::ordered_json j;
    j["site"] = dataset.site;
    j["unit"] = to_string(dataset.unit);
    auto samples = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
        const auto& s = dataset.samples[i];
        const auto& r = dataset.records[i];
        nlohmann::ordered_json item;
        item["x_time"] = s.x;
        bool has_distance_x = r.altitude_m.has_value();
        if (has_distance_x && r.kind == SampleLabel::Transect) {
            const double off = std::abs(r.timestamp_s - t_pass.at(r.transect_id));
            has_distance_x = off <= min_offset.at(r.transect_id) + 1e-9;
        }
        item["x_distance"] = has_distance_x
                                 ? nlohmann::ordered_json(*r.altitude_m)
                                 : nullptr;
        item["distance"] = s.distance;
        item["label"] = to_string(s.label);
        item["weight"] = s.weight;
        samples.push_back(std::move(item));
    }
    j["samples"] = std::move(samples);
    return j;
}

}  // namespace fidkit
