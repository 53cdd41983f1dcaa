#include "fidkit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fidkit/errors.hpp"
#include "fidkit/fit.hpp"
#include "fidkit/ingest.hpp"
#include "fidkit/model.hpp"
#include "fidkit/plan.hpp"
#include "fidkit/sim.hpp"
#include "fidkit/stats.hpp"

namespace fidkit::cli {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open output file '" + path + "'");
    return out;
}

nlohmann::json load_json(const std::string& path) {
    auto in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

void emit(const nlohmann::ordered_json& j, std::ostream& out,
          const std::string& out_path) {
    if (out_path.empty()) {
        out << j.dump(2) << '\n';
    } else {
        auto f = open_output(out_path);
        f << j.dump(2) << '\n';
    }
}

// One value per line; a single leading non-numeric line is tolerated as a
// header.
std::vector<double> load_values(const std::string& path) {
    auto in = open_input(path);
    std::vector<double> values;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty()) continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(line, &used);
            if (used != line.size()) throw std::invalid_argument(line);
            values.push_back(v);
        } catch (const std::exception&) {
            if (row == 1) continue;  // header
            throw ParseError(path + ": line " + std::to_string(row) +
                             ": not a number: '" + line + "'");
        }
    }
    return values;
}

struct DomainSamples {
    std::vector<ObservationSample> samples;
    AbscissaKind kind;
};

DomainSamples load_fit_input(const std::string& path,
                             const std::string& domain) {
    const AbscissaKind kind = domain == "distance"
                                  ? AbscissaKind::RobotDistance
                                  : AbscissaKind::TimeAlongTransect;
    DomainSamples out;
    out.kind = kind;
    const nlohmann::json j = load_json(path);
    if (!j.contains("samples"))
        throw SchemaError(path + ": expected a dataset object with 'samples'");
    for (const auto& item : j["samples"]) {
        ObservationSample s;
        if (kind == AbscissaKind::RobotDistance) {
            if (!item.contains("x_distance") || item["x_distance"].is_null())
                continue;  // no vehicle range recoverable for this record
            s.x = item["x_distance"].get<double>();
        } else {
            s.x = item.at("x_time").get<double>();
        }
        s.distance = item.at("distance").get<double>();
        s.label = sample_label_from_string(item.at("label").get<std::string>());
        s.weight = item.value("weight", 1.0);
        out.samples.push_back(s);
    }
    return out;
}

// Accepts either a bare model object or a fit-result file with a "model"
// member, so fit output feeds fid/plan directly.
DisturbanceModel load_model(const std::string& path) {
    nlohmann::json j = load_json(path);
    if (j.is_object() && j.contains("model")) j = j["model"];
    return model_from_json(j);
}

std::string sibling_csv_path(const std::string& json_path) {
    const auto dot = json_path.rfind('.');
    return (dot == std::string::npos ? json_path : json_path.substr(0, dot)) +
           ".csv";
}

std::string format_double(double v) {
    return nlohmann::ordered_json(v).dump();
}

int cmd_ingest(const std::string& input, const std::string& format,
               std::ostream& out) {
    auto in = open_input(input);
    const auto records = parse_annotations(
        in, format == "json" ? AnnotationFormat::Json : AnnotationFormat::Csv);
    const auto dataset = compute_distances(records);
    out << dataset_to_json(dataset).dump(2) << '\n';
    return 0;
}

int cmd_fit(const std::string& input, const std::string& domain,
            const std::string& out_path, std::ostream& out) {
    const auto data = load_fit_input(input, domain);
    FitOptions options;
    options.abscissa_kind = data.kind;
    const FitResult result = fit_model(data.samples, options);
    emit(to_json(result), out, out_path);
    if (!out_path.empty()) {
        auto csv = open_output(sibling_csv_path(out_path));
        csv << "x,observed,fitted\n";
        for (const auto& s : data.samples)
            csv << format_double(s.x) << ',' << format_double(s.distance)
                << ',' << format_double(evaluate(result.model, s.x)) << '\n';
    }
    return 0;
}

int cmd_fid(const std::string& model_path, double alpha, std::ostream& out) {
    const auto model = load_model(model_path);
    nlohmann::ordered_json j;
    j["fid"] = fid(model, FidQuery{alpha});
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_ks(const std::string& control_path, const std::string& transect_path,
           const std::string& ecdf_out, std::ostream& out) {
    const auto control = load_values(control_path);
    const auto transect = load_values(transect_path);
    const KsResult result = ks_two_sample(control, transect);
    out << to_json(result).dump(2) << '\n';
    if (!ecdf_out.empty()) {
        std::vector<double> c(control), t(transect), merged;
        std::sort(c.begin(), c.end());
        std::sort(t.begin(), t.end());
        merged = c;
        merged.insert(merged.end(), t.begin(), t.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        auto csv = open_output(ecdf_out);
        csv << "value,ecdf_control,ecdf_transect\n";
        for (double v : merged) {
            const double fc =
                std::upper_bound(c.begin(), c.end(), v) - c.begin();
            const double ft =
                std::upper_bound(t.begin(), t.end(), v) - t.begin();
            csv << format_double(v) << ',' << format_double(fc / c.size())
                << ',' << format_double(ft / t.size()) << '\n';
        }
    }
    return 0;
}

int cmd_simulate(const std::string& truth_path, const std::string& config_path,
                 std::uint64_t seed, bool seed_given, double cadence,
                 const std::string& out_path, std::ostream& out) {
    const auto truth = model_from_json(load_json(truth_path));
    const nlohmann::json cfg_json = load_json(config_path);
    ProtocolConfig config = protocol_config_from_json(cfg_json);
    if (seed_given) config.seed = seed;
    const double frame_rate = cfg_json.value("frame_rate", 5.0);

    std::vector<SimFrame> frames;
    if (cfg_json.contains("altitudes")) {
        const auto altitudes = cfg_json["altitudes"].get<std::vector<double>>();
        frames = simulate_campaign(truth, config, altitudes, frame_rate);
    } else {
        frames = simulate(truth, config, frame_rate);
    }
    if (cadence > 0.0) frames = subsample(frames, cadence);

    const auto records = annotations_from_frames(frames, config);
    if (out_path.empty()) {
        write_annotations(out, records, AnnotationFormat::Csv);
    } else {
        auto f = open_output(out_path);
        write_annotations(f, records, AnnotationFormat::Csv);
    }
    return 0;
}

int cmd_plan(const std::string& model_path, double alpha, double sensor_range,
             double speed, double half_length, const std::string& out_path,
             std::ostream& out) {
    const auto model = load_model(model_path);
    const StandoffPlan plan = plan_standoff(model, alpha, sensor_range);
    out << to_json(plan).dump(2) << '\n';
    if (!out_path.empty()) {
        const auto waypoints =
            plan_transect(model, alpha, speed, half_length, sensor_range);
        auto csv = open_output(out_path);
        csv << "t,x,y,z\n";
        for (const auto& w : waypoints)
            csv << format_double(w.t) << ',' << format_double(w.x_horizontal)
                << ",0," << format_double(w.altitude) << '\n';
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Bias-aware animal observation toolkit: fit the logistic "
                 "disturbance model, extract FIDs, test for disturbance, "
                 "simulate the field protocol and plan standoff transects."};
    app.require_subcommand(1);

    std::string input, format = "csv", domain = "distance", out_path;
    std::string model_path, control_path, transect_path, ecdf_out;
    std::string truth_path, config_path;
    double alpha = kDefaultAlpha;
    double sensor_range = 0.0, speed = 0.5, half_length = 4.0, cadence = 0.0;
    std::uint64_t seed = 0;

    auto* ingest = app.add_subcommand("ingest", "Parse annotations and emit "
                                                "a dataset JSON");
    ingest->add_option("--input", input)->required();
    ingest->add_option("--format", format)
        ->check(CLI::IsMember({"csv", "json"}));

    auto* fit = app.add_subcommand("fit", "Fit the disturbance model to a "
                                          "dataset");
    fit->add_option("--input", input)->required();
    fit->add_option("--domain", domain)
        ->check(CLI::IsMember({"distance", "time"}));
    fit->add_option("--out", out_path);

    auto* fid_cmd = app.add_subcommand("fid", "Flight initiation distance of "
                                              "a model");
    fid_cmd->add_option("--model", model_path)->required();
    fid_cmd->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));

    auto* ks = app.add_subcommand("ks", "Two-sample Kolmogorov-Smirnov test");
    ks->add_option("--control", control_path)->required();
    ks->add_option("--transect", transect_path)->required();
    ks->add_option("--ecdf-out", ecdf_out);

    auto* simulate = app.add_subcommand("simulate", "Generate synthetic "
                                                    "protocol annotations");
    simulate->add_option("--truth", truth_path)->required();
    simulate->add_option("--config", config_path)->required();
    auto* seed_opt = simulate->add_option("--seed", seed);
    simulate->add_option("--cadence", cadence);
    simulate->add_option("--out", out_path);

    auto* plan = app.add_subcommand("plan", "Standoff plan from a fitted "
                                            "model");
    plan->add_option("--model", model_path)->required();
    plan->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
    plan->add_option("--sensor-range", sensor_range)->required();
    plan->add_option("--speed", speed);
    plan->add_option("--half-length", half_length);
    plan->add_option("--out", out_path);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (app.got_subcommand(ingest)) return cmd_ingest(input, format, out);
        if (app.got_subcommand(fit)) return cmd_fit(input, domain, out_path, out);
        if (app.got_subcommand(fid_cmd)) return cmd_fid(model_path, alpha, out);
        if (app.got_subcommand(ks))
            return cmd_ks(control_path, transect_path, ecdf_out, out);
        if (app.got_subcommand(simulate))
            return cmd_simulate(truth_path, config_path, seed,
                                seed_opt->count() > 0, cadence, out_path, out);
        if (app.got_subcommand(plan))
            return cmd_plan(model_path, alpha, sensor_range, speed,
                            half_length, out_path, out);
    } catch (const Error& e) {
        nlohmann::ordered_json j;
        j["error"] = e.kind();
        j["message"] = e.what();
        err << j.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json j;
        j["error"] = "InternalError";
        j["message"] = e.what();
        err << j.dump() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace fidkit::cli
