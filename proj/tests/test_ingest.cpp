#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "fidkit/errors.hpp"
#include "fidkit/ingest.hpp"

using namespace fidkit;

namespace {

AnnotationRecord make_record(std::string frame_id, double timestamp,
                             SampleLabel kind, std::string transect_id,
                             double fish_x, double fish_y) {
    AnnotationRecord r;
    r.frame_id = std::move(frame_id);
    r.timestamp_s = timestamp;
    r.kind = kind;
    r.transect_id = std::move(transect_id);
    r.fish_x_px = fish_x;
    r.fish_y_px = fish_y;
    return r;
}

// Brute-force reference grouping: for each control, scan every transect
// record to find the latest transect finishing no later than the control.
std::map<std::string, FrameGroup> brute_force_groups(const SiteDataset& d) {
    std::map<std::string, FrameGroup> groups;
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const auto& r = d.records[i];
        if (r.kind == SampleLabel::Transect) {
            groups[r.transect_id].transect_records.push_back(i);
            continue;
        }
        std::string best;
        double best_ts = -1e300;
        for (const auto& other : d.records) {
            if (other.kind != SampleLabel::Transect) continue;
            double last = -1e300;
            for (const auto& t : d.records)
                if (t.kind == SampleLabel::Transect &&
                    t.transect_id == other.transect_id)
                    last = std::max(last, t.timestamp_s);
            if (last <= r.timestamp_s && last > best_ts) {
                best = other.transect_id;
                best_ts = last;
            }
        }
        groups[best.empty() ? kBaselineGroupId : best].control_records
            .push_back(i);
    }
    return groups;
}

}  // namespace

TEST_CASE("empty CSV with a valid header parses to an empty list") {
    std::istringstream in(std::string(kAnnotationCsvHeader) + "\n");
    CHECK(parse_annotations(in, AnnotationFormat::Csv).empty());
}

TEST_CASE("a single CSV row round-trips through write and parse") {
    std::istringstream in(
        std::string(kAnnotationCsvHeader) +
        "\nf0,12.5,transect,t1,1.5,10,20,3,4,0.01\n");
    const auto records = parse_annotations(in, AnnotationFormat::Csv);
    REQUIRE(records.size() == 1);
    CHECK(records[0].frame_id == "f0");
    CHECK(records[0].timestamp_s == 12.5);
    CHECK(records[0].kind == SampleLabel::Transect);
    CHECK(records[0].transect_id == "t1");
    CHECK(records[0].altitude_m == 1.5);
    CHECK(records[0].scale_m_per_px == 0.01);

    for (auto format : {AnnotationFormat::Csv, AnnotationFormat::Json}) {
        std::ostringstream out;
        write_annotations(out, records, format);
        std::istringstream back(out.str());
        const auto reparsed = parse_annotations(back, format);
        REQUIRE(reparsed.size() == 1);
        CHECK(reparsed[0].frame_id == records[0].frame_id);
        CHECK(reparsed[0].timestamp_s == records[0].timestamp_s);
        CHECK(reparsed[0].altitude_m == records[0].altitude_m);
        CHECK(reparsed[0].fish_x_px == records[0].fish_x_px);
        CHECK(reparsed[0].scale_m_per_px == records[0].scale_m_per_px);
    }
}

TEST_CASE("negative scale is rejected with the field name") {
    std::istringstream in(std::string(kAnnotationCsvHeader) +
                          "\nf0,1,control,,,1,2,3,4,-0.5\n");
    CHECK_THROWS_WITH_AS(parse_annotations(in, AnnotationFormat::Csv),
                         doctest::Contains("scale_m_per_px"), ParseError);
}

TEST_CASE("missing required column raises SchemaError naming it") {
    std::istringstream in("frame_id,timestamp_s,kind,transect_id\n");
    CHECK_THROWS_WITH_AS(parse_annotations(in, AnnotationFormat::Csv),
                         doctest::Contains("altitude_m"), SchemaError);
}

TEST_CASE("malformed numbers are reported with the row") {
    std::istringstream in(std::string(kAnnotationCsvHeader) +
                          "\nf0,1,control,,,1,2,3,4,\n"
                          "f1,abc,control,,,1,2,3,4,\n");
    CHECK_THROWS_WITH_AS(parse_annotations(in, AnnotationFormat::Csv),
                         doctest::Contains("row 3"), ParseError);
}

TEST_CASE("unknown columns are ignored") {
    std::istringstream in(std::string(kAnnotationCsvHeader) +
                          ",species\nf0,1,control,,,3,4,0,0,,wrasse\n");
    const auto records = parse_annotations(in, AnnotationFormat::Csv);
    REQUIRE(records.size() == 1);
    CHECK(records[0].fish_x_px == 3.0);
}

TEST_CASE("compute_distances: pixel and scaled Euclidean distances") {
    auto r = make_record("f0", 0.0, SampleLabel::Control, "", 3.0, 4.0);
    const auto px = compute_distances(std::vector<AnnotationRecord>{r});
    CHECK(px.unit == DistanceUnit::Pixels);
    CHECK(px.samples[0].distance == 5.0);

    r.scale_m_per_px = 0.01;
    const auto meters = compute_distances(std::vector<AnnotationRecord>{r});
    CHECK(meters.unit == DistanceUnit::Meters);
    CHECK(meters.samples[0].distance == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("mixed scaled and unscaled records are rejected") {
    auto a = make_record("f0", 0.0, SampleLabel::Control, "", 1.0, 0.0);
    auto b = a;
    b.scale_m_per_px = 0.01;
    CHECK_THROWS_AS(compute_distances(std::vector<AnnotationRecord>{a, b}),
                    MixedUnits);
    CHECK_THROWS_AS(compute_distances(std::vector<AnnotationRecord>{}),
                    EmptyInput);
}

TEST_CASE("distances are invariant under rigid pixel transforms") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> coord(-500.0, 500.0);
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    for (int trial = 0; trial < 50; ++trial) {
        auto r = make_record("f", 0.0, SampleLabel::Control, "", coord(rng),
                             coord(rng));
        r.shelter_x_px = coord(rng);
        r.shelter_y_px = coord(rng);
        const double d0 =
            compute_distances(std::vector<AnnotationRecord>{r}).samples[0].distance;

        const double th = angle(rng), tx = coord(rng), ty = coord(rng);
        auto rotate = [&](double& x, double& y) {
            const double nx = std::cos(th) * x - std::sin(th) * y + tx;
            const double ny = std::sin(th) * x + std::cos(th) * y + ty;
            x = nx;
            y = ny;
        };
        rotate(r.fish_x_px, r.fish_y_px);
        rotate(r.shelter_x_px, r.shelter_y_px);
        const double d1 =
            compute_distances(std::vector<AnnotationRecord>{r}).samples[0].distance;
        CHECK(std::abs(d1 - d0) <= 1e-9 * std::max(1.0, d0));
    }
}

TEST_CASE("transect sample x is the offset from the closest-approach frame") {
    std::vector<AnnotationRecord> records;
    for (double t : {90.0, 100.0, 110.0})
        records.push_back(
            make_record("f", t, SampleLabel::Transect, "t0", 1.0, 0.0));
    const auto dataset = compute_distances(records);
    CHECK(dataset.samples[0].x == 10.0);  // |90 - 100|
    CHECK(dataset.samples[1].x == 0.0);
    CHECK(dataset.samples[2].x == 10.0);
}

TEST_CASE("controls only form a single baseline group") {
    std::vector<AnnotationRecord> records = {
        make_record("f0", 0.0, SampleLabel::Control, "", 1.0, 0.0),
        make_record("f1", 5.0, SampleLabel::Control, "", 2.0, 0.0)};
    const auto groups = group_frames(compute_distances(records));
    REQUIRE(groups.size() == 1);
    CHECK(groups.count(kBaselineGroupId) == 1);
    CHECK(groups.at(kBaselineGroupId).control_records.size() == 2);
}

TEST_CASE("a control 60 s after a pass attaches to that transect") {
    std::vector<AnnotationRecord> records = {
        make_record("f0", 100.0, SampleLabel::Transect, "t0", 1.0, 0.0),
        make_record("f1", 160.0, SampleLabel::Control, "", 2.0, 0.0)};
    const auto groups = group_frames(compute_distances(records));
    REQUIRE(groups.count("t0") == 1);
    CHECK(groups.at("t0").control_records ==
          std::vector<std::size_t>{1});
}

TEST_CASE("interleaved transects match the brute-force grouping") {
    std::vector<AnnotationRecord> records;
    records.push_back(make_record("c-1", 5.0, SampleLabel::Control, "", 1, 0));
    for (int t = 0; t < 3; ++t) {
        const double start = 100.0 * (t + 1);
        for (int j = 0; j < 4; ++j)
            records.push_back(make_record("tf", start + j * 5.0,
                                          SampleLabel::Transect,
                                          "t" + std::to_string(t), 1, 0));
        records.push_back(
            make_record("cf", start + 75.0, SampleLabel::Control, "", 2, 0));
    }
    const auto dataset = compute_distances(records);
    const auto groups = group_frames(dataset);
    const auto reference = brute_force_groups(dataset);
    CHECK(groups.size() == reference.size());
    for (const auto& [id, group] : reference) {
        REQUIRE(groups.count(id) == 1);
        CHECK(groups.at(id).transect_records == group.transect_records);
        CHECK(groups.at(id).control_records == group.control_records);
    }
    // Every record lands in exactly one group.
    std::size_t total = 0;
    for (const auto& [id, group] : groups)
        total += group.transect_records.size() + group.control_records.size();
    CHECK(total == records.size());
}

TEST_CASE("simulated frames survive the annotation round trip") {
    DisturbanceModel truth{2.0, 1.0, 1.0, 5.0, AbscissaKind::RobotDistance};
    ProtocolConfig config;
    config.altitude = 1.5;
    config.speed = 1.0;
    config.transect_half_length = 4.0;
    config.n_transects = 2;
    config.n_fish = 3;
    const auto frames = simulate(truth, config, 5.0);
    const auto records = annotations_from_frames(frames, config);
    const auto dataset = compute_distances(records);
    CHECK(dataset.unit == DistanceUnit::Meters);

    // Distances come back exactly (fish placed on the pixel axis, scale 1).
    std::size_t i = 0;
    for (const auto& f : frames)
        for (double d : f.fish_distances)
            CHECK(dataset.samples[i++].distance == d);

    // Distance-domain samples: transect rows collapse to the
    // closest-approach frame at x = altitude; control rows keep their range.
    const auto by_distance = distance_domain_samples(dataset);
    int transect_count = 0;
    for (const auto& s : by_distance)
        if (s.label == SampleLabel::Transect) {
            CHECK(s.x == config.altitude);
            ++transect_count;
        } else {
            CHECK(s.x == std::hypot(config.altitude,
                                    config.standoff_during_wait));
        }
    CHECK(transect_count == config.n_transects * config.n_fish);
}
