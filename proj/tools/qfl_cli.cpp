// qfl: build foliated fusion lattices for CSS qLDPC codes, sample noise,
// decode, and estimate logical error rates and pseudo-thresholds.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qfl/css_code.hpp"
#include "qfl/decoder.hpp"
#include "qfl/experiments.hpp"
#include "qfl/foliation.hpp"
#include "qfl/noise.hpp"
#include "qfl/oracle.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;
namespace fs = std::filesystem;
using namespace qfl;

struct CommonOpts {
    std::string code = "bb72";
    std::size_t toric_L = 3;
    std::string code_file;
    std::string bb_spec_file;
    int T = -1;  // -1: use preset depth
    uint64_t trials = 10000;
    uint64_t seed = 1;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out_dir;
    bool plot = false;
};

std::string default_out_dir() {
    const char* env = std::getenv("QFL_OUT_DIR");
    return env ? env : ".";
}

codes::CssCode resolve_code(const CommonOpts& o) {
    if (!o.code_file.empty()) return codes::load_code(o.code_file);
    if (!o.bb_spec_file.empty()) return codes::build_bb_code(codes::load_bb_spec(o.bb_spec_file));
    if (o.code == "toric") return codes::build_toric_code(o.toric_L);
    auto it = codes::bb_presets().find(o.code);
    if (it == codes::bb_presets().end())
        throw CLI::ValidationError("--code", "unknown code '" + o.code + "'");
    return codes::build_bb_code(it->second.spec, o.code);
}

std::size_t resolve_T(const CommonOpts& o) {
    if (o.T > 0) return static_cast<std::size_t>(o.T);
    if (o.code == "toric") return o.toric_L;
    auto it = codes::bb_presets().find(o.code);
    if (it != codes::bb_presets().end()) return it->second.rounds_hint;
    throw CLI::ValidationError("--T", "an explicit number of rounds is required for this code");
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--code", o.code, "bb72|bb90|bb108|bb144|toric");
    cmd->add_option("--L", o.toric_L, "Toric lattice side");
    cmd->add_option("--code-file", o.code_file, "text file with H_X and H_Z");
    cmd->add_option("--bb-spec", o.bb_spec_file, "JSON file with l, m, a_terms, b_terms");
    cmd->add_option("--T", o.T, "measurement rounds (default: code preset)");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", o.seed, "global seed");
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("--out-dir", o.out_dir, "output directory (default $QFL_OUT_DIR or .)");
    cmd->add_flag("--plot", o.plot, "emit an SVG plot next to the CSV");
}

json common_to_json(const std::string& command, const CommonOpts& o) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["code"] = o.code;
    j["L"] = o.toric_L;
    if (!o.code_file.empty()) j["code_file"] = o.code_file;
    if (!o.bb_spec_file.empty()) j["bb_spec"] = o.bb_spec_file;
    j["T"] = o.T;
    j["trials"] = o.trials;
    j["seed"] = o.seed;
    return j;
}

void common_from_json(const json& j, CommonOpts& o) {
    if (j.contains("code")) o.code = j["code"].get<std::string>();
    if (j.contains("L")) o.toric_L = j["L"].get<std::size_t>();
    if (j.contains("code_file")) o.code_file = j["code_file"].get<std::string>();
    if (j.contains("bb_spec")) o.bb_spec_file = j["bb_spec"].get<std::string>();
    if (j.contains("T")) o.T = j["T"].get<int>();
    if (j.contains("trials")) o.trials = j["trials"].get<uint64_t>();
    if (j.contains("seed")) o.seed = j["seed"].get<uint64_t>();
}

fs::path prepare_out_dir(CommonOpts& o) {
    if (o.out_dir.empty()) o.out_dir = default_out_dir();
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_manifest(const fs::path& dir, const json& manifest) {
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

// Minimal SVG polyline plot generated from CSV rows on disk, log-scale y.
struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

void write_svg_plot(const fs::path& path, const std::string& x_label,
                    const std::vector<PlotSeries>& series) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (y <= 0) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, std::log10(y));
            ymax = std::max(ymax, std::log10(y));
        }
    if (xmax <= xmin || ymax <= ymin) {
        xmin = 0, xmax = 1, ymin = -3, ymax = 0;
    }
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 20, mb = 50;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double ly) { return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb); };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#7f7f7f"};

    std::ofstream out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    out << "<text x='" << W / 2 << "' y='" << H - 12 << "' text-anchor='middle' font-size='13'>"
        << x_label << "</text>\n";
    out << "<text x='16' y='" << H / 2 << "' font-size='13' transform='rotate(-90 16 " << H / 2
        << ")' text-anchor='middle'>logical error rate</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::ostringstream pts;
        for (auto [x, y] : series[i].points)
            if (y > 0) pts << px(x) << ',' << py(std::log10(y)) << ' ';
        out << "<polyline fill='none' stroke='" << colors[i % 6] << "' stroke-width='1.5' points='"
            << pts.str() << "'/>\n";
        out << "<text x='" << W - mr - 150 << "' y='" << mt + 16 + 16 * i << "' fill='"
            << colors[i % 6] << "' font-size='12'>" << series[i].label << "</text>\n";
    }
    out << "</svg>\n";
}

std::vector<experiments::SweepPoint> read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<experiments::SweepPoint> rows;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 12) continue;
        experiments::SweepPoint p;
        p.code = f[0];
        p.T = std::stoul(f[1]);
        p.noise.kind = f[2] == "iid" ? noise::NoiseKind::IID : noise::NoiseKind::RUS;
        p.noise.p_e = std::stod(f[3]);
        p.noise.p_l = std::stod(f[4]);
        p.noise.eta = std::stod(f[5]);
        p.noise.max_attempts = std::stoi(f[6]);
        p.trials = std::stoull(f[7]);
        p.failures = std::stoull(f[8]);
        p.p_bar = std::stod(f[9]);
        p.ci_low = std::stod(f[10]);
        p.ci_high = std::stod(f[11]);
        rows.push_back(std::move(p));
    }
    return rows;
}

int cmd_validate(const CommonOpts& o) {
    codes::CssCode code = resolve_code(o);
    codes::ValidationReport rep = codes::validate(code);
    std::cout << "n=" << rep.n << " k=" << rep.k
              << " commutation=" << (rep.commutation_ok ? "ok" : "FAIL") << '\n';
    auto hist = [](const std::map<std::size_t, std::size_t>& h) {
        std::string s;
        for (auto [w, c] : h) s += std::to_string(w) + "x" + std::to_string(c) + " ";
        return s;
    };
    std::cout << "row weights H_X: " << hist(rep.row_weights_x) << '\n';
    std::cout << "row weights H_Z: " << hist(rep.row_weights_z) << '\n';
    std::cout << "col weights H_X: " << hist(rep.col_weights_x) << '\n';
    std::cout << "col weights H_Z: " << hist(rep.col_weights_z) << '\n';
    if (!rep.commutation_ok) {
        for (auto [rx, rz] : rep.violations)
            std::cout << "anticommuting pair: X-check " << rx << ", Z-check " << rz << '\n';
        return 1;
    }
    return 0;
}

int cmd_inventory(const CommonOpts& o) {
    codes::CssCode code = resolve_code(o);
    foliation::FoliatedLattice lat = foliation::foliate(code, resolve_T(o));
    foliation::InventoryReport rep = foliation::resource_inventory(lat);
    std::cout << "chains=" << rep.chains << " length=" << rep.chain_length << '\n';
    std::cout << "leaves per chain node:";
    for (auto [w, c] : rep.leaves_per_node) std::cout << ' ' << w << 'x' << c;
    std::cout << '\n';
    std::cout << "ghz states=" << rep.ghz_states << " sizes:";
    for (auto [w, c] : rep.ghz_size) std::cout << ' ' << w << 'x' << c;
    std::cout << '\n';
    std::cout << "fusions=" << rep.fusions << " fusion photons=" << rep.fusion_photons << '\n';
    return 0;
}

int cmd_verify_oracle(const CommonOpts& o, bool with_events) {
    codes::CssCode code = resolve_code(o);
    foliation::FoliatedLattice lat = foliation::foliate(code, resolve_T(o));
    foliation::DecodingProblem prob = foliation::build_decoding_problem(lat);
    oracle::Report rep = oracle::verify_incidence(lat, prob);
    std::cout << "incidence: " << (rep.pass ? "PASS" : "FAIL") << " (" << rep.checks
              << " checks, " << rep.negative_sign_rows << " negative resting signs)\n";
    for (const auto& m : rep.mismatches) std::cout << "  " << m << '\n';
    if (!rep.pass) return 1;
    if (with_events) {
        std::vector<oracle::ScriptedEvent> script = {
            {0, oracle::EventKind::FailMeasureAncilla},
            {static_cast<uint32_t>(lat.fusions.size() / 3), oracle::EventKind::FailMeasureData},
            {static_cast<uint32_t>(lat.fusions.size() / 2), oracle::EventKind::Loss},
            {static_cast<uint32_t>(lat.fusions.size() - 1), oracle::EventKind::Skip},
        };
        oracle::Report ev = oracle::verify_event_semantics(lat, prob, script);
        std::cout << "event-semantics: " << (ev.pass ? "PASS" : "FAIL") << " (" << ev.checks
                  << " checks)\n";
        for (const auto& m : ev.mismatches) std::cout << "  " << m << '\n';
        if (!ev.pass) return 1;
    }
    return 0;
}

int cmd_sample_one(CommonOpts& o, const noise::NoiseConfig& cfg, bool dump, bool debug) {
    codes::CssCode code = resolve_code(o);
    experiments::Bundle b = experiments::make_bundle(code, resolve_T(o));
    noise::TrialRng rng(o.seed, 0, 0);
    noise::TrialNoise tn = noise::sample(b.lattice, b.problem, cfg, rng);
    gf2::BitVec syndrome = b.problem.syndrome_of(tn.error);
    decoder::UnionFindDecoder dec(b.problem);
    gf2::BitVec correction = dec.decode(syndrome, tn.erased, debug ? &std::cout : nullptr);
    gf2::BitVec flips = decoder::logical_flip(b.problem, correction, tn.error);
    auto lost = decoder::lost_logicals(b.problem, tn.erased);
    std::cout << "errors=" << tn.error.popcount() << " erased=" << tn.erased.size()
              << " syndrome_weight=" << syndrome.popcount()
              << " correction_weight=" << correction.popcount() << " flips=" << flips.popcount()
              << " lost=" << lost.size() << '\n';
    if (dump) {
        fs::path dir = prepare_out_dir(o);
        std::ofstream out(dir / "lattice.txt");
        foliation::dump_lattice(b.lattice, b.problem, out);
        json manifest = common_to_json("sample-one", o);
        write_manifest(dir, manifest);
        std::cout << "lattice dump: " << (dir / "lattice.txt").string() << '\n';
    }
    return 0;
}

int cmd_sweep(CommonOpts& o, std::vector<double> thetas, std::size_t x_points) {
    codes::CssCode code = resolve_code(o);
    experiments::Bundle b = experiments::make_bundle(code, resolve_T(o));
    fs::path dir = prepare_out_dir(o);
    std::vector<double> grid(x_points);
    for (std::size_t i = 0; i < x_points; ++i)
        grid[i] = x_points > 1 ? static_cast<double>(i) / (x_points - 1) : 0.0;

    fs::path csv_path = dir / "sweep.csv";
    std::ofstream csv(csv_path);
    experiments::write_csv_header(csv);
    for (double theta : thetas) {
        auto points = experiments::sweep_line(b, theta, grid, o.trials, o.seed, o.threads);
        for (const auto& p : points) experiments::write_csv_row(csv, p);
        csv.flush();  // partial results survive interruption
    }
    csv.close();

    json manifest = common_to_json("sweep", o);
    manifest["thetas"] = thetas;
    manifest["x_points"] = x_points;
    write_manifest(dir, manifest);
    std::cout << "wrote " << csv_path.string() << '\n';

    if (o.plot) {
        auto rows = read_csv(csv_path);
        PlotSeries data{"p_bar (" + code.name + ")", {}};
        PlotSeries even{"break-even k=" + std::to_string(code.k), {}};
        for (const auto& r : rows) {
            double x = r.noise.p_e + r.noise.p_l;  // monotone along each line
            data.points.emplace_back(x, r.p_bar);
            even.points.emplace_back(
                x, experiments::break_even(noise::combined_error_rate(r.noise.p_e, r.noise.p_l),
                                           code.k));
        }
        write_svg_plot(dir / "sweep.svg", "physical rate (p_e + p_l)", {data, even});
        std::cout << "wrote " << (dir / "sweep.svg").string() << '\n';
    }
    return 0;
}

int cmd_pseudo_threshold(CommonOpts& o, const std::string& axis) {
    codes::CssCode code = resolve_code(o);
    experiments::Bundle b = experiments::make_bundle(code, resolve_T(o));
    double theta;
    if (axis == "error-only")
        theta = 0.0;
    else if (axis == "erasure-only")
        theta = M_PI_2;
    else
        theta = std::stod(axis.substr(axis.find('=') + 1));

    auto res = experiments::pseudo_threshold(b, theta, o.trials, o.seed, o.threads);
    fs::path dir = prepare_out_dir(o);
    std::ofstream jout(dir / "pseudo_threshold.json");
    jout << experiments::pseudo_threshold_json(res) << '\n';
    std::ofstream csv(dir / "pseudo_threshold_points.csv");
    experiments::write_csv_header(csv);
    for (const auto& p : res.evaluations) experiments::write_csv_row(csv, p);
    json manifest = common_to_json("pseudo-threshold", o);
    manifest["axis"] = axis;
    write_manifest(dir, manifest);
    std::cout << experiments::pseudo_threshold_json(res) << '\n';
    return 0;
}

int cmd_rus_curve(CommonOpts& o, std::vector<int> n_values, const std::string& strategy,
                  bool lost_as_random, std::size_t l_small, std::size_t l_large) {
    experiments::RusCurveOptions opts;
    opts.strategy =
        strategy == "standard" ? noise::RusStrategy::Standard : noise::RusStrategy::Modified;
    if (lost_as_random) opts.rule = experiments::FailureRule::AnyLogicalFlip;

    fs::path dir = prepare_out_dir(o);
    std::ofstream csv(dir / "rus_curve.csv");
    experiments::write_csv_header(csv);
    json results = json::array();

    if (l_small && l_large) {
        experiments::Bundle a = experiments::make_bundle(codes::build_toric_code(l_small), l_small);
        experiments::Bundle b = experiments::make_bundle(codes::build_toric_code(l_large), l_large);
        for (int n : n_values) {
            auto res = experiments::rus_size_crossing(a, b, n, o.trials, o.seed, o.threads, opts);
            for (const auto& p : res.evaluations) experiments::write_csv_row(csv, p);
            csv.flush();
            results.push_back(json::parse(experiments::pseudo_threshold_json(res)));
            std::cout << res.axis << " crossing=" << res.crossing << '\n';
        }
    } else {
        codes::CssCode code = resolve_code(o);
        experiments::Bundle b = experiments::make_bundle(code, resolve_T(o));
        auto curve = experiments::rus_threshold_curve(b, n_values, o.trials, o.seed, o.threads, opts);
        for (const auto& res : curve) {
            for (const auto& p : res.evaluations) experiments::write_csv_row(csv, p);
            csv.flush();
            results.push_back(json::parse(experiments::pseudo_threshold_json(res)));
            std::cout << res.axis << " pseudo-threshold=" << res.crossing << '\n';
        }
    }
    std::ofstream jout(dir / "rus_curve.json");
    jout << results.dump(2) << '\n';

    json manifest = common_to_json("rus-curve", o);
    manifest["N"] = n_values;
    manifest["strategy"] = strategy;
    manifest["lost_as_random"] = lost_as_random;
    if (l_small && l_large) {
        manifest["L_small"] = l_small;
        manifest["L_large"] = l_large;
    }
    write_manifest(dir, manifest);

    if (o.plot) {
        PlotSeries s{"loss pseudo-threshold vs N", {}};
        for (const auto& r : results)
            s.points.emplace_back(0, 0);  // filled below from JSON
        s.points.clear();
        for (const auto& r : results) {
            std::string axis = r["axis"].get<std::string>();
            auto pos = axis.find("N=");
            double n = pos == std::string::npos ? 0 : std::stod(axis.substr(pos + 2));
            s.points.emplace_back(n, r["crossing"].get<double>());
        }
        write_svg_plot(dir / "rus_curve.svg", "max repetitions N", {s});
    }
    return 0;
}

int cmd_grid(CommonOpts& o, std::size_t pe_points, std::size_t pl_points) {
    codes::CssCode code = resolve_code(o);
    experiments::Bundle b = experiments::make_bundle(code, resolve_T(o));
    experiments::SweepBounds bounds;
    std::vector<double> pe(pe_points), pl(pl_points);
    for (std::size_t i = 0; i < pe_points; ++i)
        pe[i] = bounds.p_e_min +
                (pe_points > 1 ? i * (bounds.p_e_max - bounds.p_e_min) / (pe_points - 1) : 0.0);
    for (std::size_t i = 0; i < pl_points; ++i)
        pl[i] = bounds.p_l_min +
                (pl_points > 1 ? i * (bounds.p_l_max - bounds.p_l_min) / (pl_points - 1) : 0.0);
    auto rows = experiments::grid_sweep(b, pe, pl, o.trials, o.seed, o.threads);
    fs::path dir = prepare_out_dir(o);
    std::ofstream csv(dir / "grid.csv");
    experiments::write_csv_header(csv);
    for (const auto& p : rows) experiments::write_csv_row(csv, p);
    json manifest = common_to_json("grid", o);
    manifest["pe_points"] = pe_points;
    manifest["pl_points"] = pl_points;
    write_manifest(dir, manifest);
    std::cout << "wrote " << (dir / "grid.csv").string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"foliated fusion-lattice simulator for CSS qLDPC codes"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config/manifest; flags override its values")
        ->expected(1);

    CommonOpts o;
    std::vector<double> thetas{0.0};
    std::size_t x_points = 11;
    std::string axis = "error-only";
    std::vector<int> n_values{8};
    std::string strategy = "modified";
    bool lost_as_random = false;
    std::size_t l_small = 0, l_large = 0;
    std::size_t pe_points = 6, pl_points = 6;
    double pe = 0.0, pl = 0.0, eta = -1.0;
    bool dump = false, debug = false, with_events = false;

    CLI::App* validate = app.add_subcommand("validate-code", "construct and validate a code");
    add_common(validate, o);
    CLI::App* inventory = app.add_subcommand("inventory", "resource-state inventory of a lattice");
    add_common(inventory, o);
    CLI::App* verify = app.add_subcommand("verify-oracle", "stabilizer-oracle validation");
    add_common(verify, o);
    verify->add_flag("--events", with_events, "also run scripted RUS event semantics");
    CLI::App* sample = app.add_subcommand("sample-one", "sample and decode a single trial");
    add_common(sample, o);
    sample->add_option("--pe", pe, "fusion error rate");
    sample->add_option("--pl", pl, "fusion erasure rate");
    sample->add_option("--eta", eta, "RUS efficiency (enables RUS noise)");
    sample->add_option("--N", n_values, "RUS max attempts");
    sample->add_flag("--dump-lattice", dump, "write the lattice dump");
    sample->add_flag("--debug", debug, "print decoder growth trace");
    CLI::App* sweep = app.add_subcommand("sweep", "theta-line sweeps of the iid noise space");
    add_common(sweep, o);
    sweep->add_option("--theta", thetas, "sweep angles (radians)");
    sweep->add_option("--x-points", x_points, "grid points per line");
    CLI::App* pseudo = app.add_subcommand("pseudo-threshold", "break-even crossing on an axis");
    add_common(pseudo, o);
    pseudo->add_option("--axis", axis, "error-only|erasure-only|theta=<radians>");
    CLI::App* rus = app.add_subcommand("rus-curve", "photon-loss thresholds vs N");
    add_common(rus, o);
    rus->add_option("--N", n_values, "repetition caps to evaluate");
    rus->add_option("--strategy", strategy, "standard|modified");
    rus->add_flag("--lost-as-random", lost_as_random,
                  "decode with randomized erased bits instead of counting lost logicals");
    rus->add_option("--L-small", l_small, "toric crossing: smaller side");
    rus->add_option("--L-large", l_large, "toric crossing: larger side");
    CLI::App* grid = app.add_subcommand("grid", "p_e x p_l grid sweep");
    add_common(grid, o);
    grid->add_option("--pe-points", pe_points, "error-axis points");
    grid->add_option("--pl-points", pl_points, "erasure-axis points");

    // Config file values apply first; explicitly passed flags then override
    // them because CLI11 parses flags after we re-assign defaults.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config " + config_path);
            json j;
            in >> j;
            CommonOpts from_file = o;
            common_from_json(j, from_file);
            // Flags the user actually passed keep their parsed values.
            CLI::App* sub = app.get_subcommands().front();
            auto keep = [&](const std::string& flag) { return sub->count(flag) > 0; };
            if (!keep("--code")) o.code = from_file.code;
            if (!keep("--L")) o.toric_L = from_file.toric_L;
            if (!keep("--code-file")) o.code_file = from_file.code_file;
            if (!keep("--bb-spec")) o.bb_spec_file = from_file.bb_spec_file;
            if (!keep("--T")) o.T = from_file.T;
            if (!keep("--trials")) o.trials = from_file.trials;
            if (!keep("--seed")) o.seed = from_file.seed;
            if (j.contains("thetas") && !sub->count("--theta"))
                thetas = j["thetas"].get<std::vector<double>>();
            if (j.contains("x_points")) x_points = j["x_points"].get<std::size_t>();
            if (j.contains("axis") && axis == "error-only") axis = j["axis"].get<std::string>();
            if (j.contains("N") && !sub->count("--N")) n_values = j["N"].get<std::vector<int>>();
            if (j.contains("strategy")) strategy = j["strategy"].get<std::string>();
            if (j.contains("lost_as_random")) lost_as_random = j["lost_as_random"].get<bool>();
            if (j.contains("L_small")) l_small = j["L_small"].get<std::size_t>();
            if (j.contains("L_large")) l_large = j["L_large"].get<std::size_t>();
            if (j.contains("pe_points")) pe_points = j["pe_points"].get<std::size_t>();
            if (j.contains("pl_points")) pl_points = j["pl_points"].get<std::size_t>();
        }

        if (validate->parsed()) return cmd_validate(o);
        if (inventory->parsed()) return cmd_inventory(o);
        if (verify->parsed()) return cmd_verify_oracle(o, with_events);
        if (sample->parsed()) {
            noise::NoiseConfig cfg;
            if (eta >= 0) {
                cfg.kind = noise::NoiseKind::RUS;
                cfg.eta = eta;
                cfg.max_attempts = n_values.empty() ? 1 : n_values.front();
            } else {
                cfg.p_e = pe;
                cfg.p_l = pl;
            }
            return cmd_sample_one(o, cfg, dump, debug);
        }
        if (sweep->parsed()) return cmd_sweep(o, thetas, x_points);
        if (pseudo->parsed()) return cmd_pseudo_threshold(o, axis);
        if (rus->parsed()) return cmd_rus_curve(o, n_values, strategy, lost_as_random, l_small, l_large);
        if (grid->parsed()) return cmd_grid(o, pe_points, pl_points);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
