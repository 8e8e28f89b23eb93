// Batch front end: parse map/fan inputs, dispatch to tropicalize /
// rotation / stability / stabilize / degrees / compose, and emit one JSON
// report per invocation. Exit codes: 0 a stable/corrigible (or plain
// informational) verdict was produced, 2 certified not stabilizable,
// 3 undetermined, 64 input parse failure, 1 other runtime errors.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toricstab/io.hpp"

namespace ts = toricstab;
using ts::json;

namespace {

struct ParseFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JobSpec {
    std::string command;
    ts::MapInput map;
    std::optional<ts::MapInput> second_map;  // compose
    ts::Fan fan = ts::Fan::p2();
    unsigned max_period = 24;
    unsigned bound = 64;
    unsigned iterations = 10000;
    ts::RationalRay seed{1, 0};
    bool denjoy = false;
    bool empirical_smaller = false;
    std::string rays_csv_path;
};

struct JobOutcome {
    json report;
    int exit_code = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseFailure("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Accepts inline JSON or a path to a JSON file.
json json_or_file(const std::string& arg, const char* what) {
    std::string text = arg;
    if (!arg.empty() && arg.front() != '{' && arg.front() != '[') text = read_file(arg);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseFailure(std::string(what) + ": invalid JSON: " + e.what());
    }
}

ts::MapInput parse_map_arg(const std::string& monomial, const std::string& map_arg) {
    if (!monomial.empty() && !map_arg.empty())
        throw ParseFailure("map input: give exactly one of --monomial or --map");
    if (!monomial.empty()) {
        std::istringstream in(monomial);
        std::vector<ts::BigInt> entries;
        std::string tok;
        while (in >> tok) {
            try {
                entries.emplace_back(tok);
            } catch (...) {
                throw ParseFailure("--monomial: not an integer: " + tok);
            }
        }
        if (entries.size() != 4)
            throw ParseFailure("--monomial: expected four row-major integers \"a b c d\"");
        ts::MapInput in2;
        in2.monomial = ts::IntMatrix(entries[0], entries[1], entries[2], entries[3]);
        return in2;
    }
    if (!map_arg.empty()) {
        try {
            return ts::map_input_from_json(json_or_file(map_arg, "--map"));
        } catch (const ParseFailure&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseFailure(std::string("--map: ") + e.what());
        }
    }
    throw ParseFailure("map input: give one of --monomial or --map");
}

ts::Fan parse_fan_arg(const std::string& arg) {
    if (arg.empty() || arg == "p2") return ts::Fan::p2();
    if (arg == "p1xp1") return ts::Fan::p1xp1();
    try {
        if (arg.front() == '[') return ts::fan_from_json(json::parse(arg));
        if (std::filesystem::exists(arg)) {
            const std::string text = read_file(arg);
            const std::string trimmed = text.substr(text.find_first_not_of(" \t\r\n"));
            if (!trimmed.empty() && trimmed.front() == '[')
                return ts::fan_from_json(json::parse(trimmed));
            return ts::fan_from_text(text);
        }
        return ts::fan_from_text(arg);
    } catch (const std::exception& e) {
        throw ParseFailure(std::string("--fan: ") + e.what());
    }
}

void emit_rays_csv(const ts::PLIntegralMap& T, const JobSpec& job) {
    std::ofstream out(job.rays_csv_path);
    if (!out) throw std::runtime_error("cannot write " + job.rays_csv_path);
    out << "step,angle\n";
    double x = ts::to_double(job.seed.gen().x), y = ts::to_double(job.seed.gen().y);
    const auto& fan = T.domain_fan();
    for (unsigned k = 0; k < job.iterations; ++k) {
        out << k << "," << std::atan2(y, x) << "\n";
        std::size_t piece = 0;
        for (std::size_t i = 0; i < fan.size(); ++i) {
            const std::size_t j = (i + 1) % fan.size();
            const double c1 = ts::to_double(fan.ray(i).gen().x) * y -
                              ts::to_double(fan.ray(i).gen().y) * x;
            const double c2 = x * ts::to_double(fan.ray(j).gen().y) -
                              y * ts::to_double(fan.ray(j).gen().x);
            if (c1 >= 0 && c2 > 0) {
                piece = i;
                break;
            }
        }
        const auto& m = T.piece(piece);
        const double nx = ts::to_double(m.a) * x + ts::to_double(m.b) * y;
        const double ny = ts::to_double(m.c) * x + ts::to_double(m.d) * y;
        const double norm = std::hypot(nx, ny);
        x = nx / norm;
        y = ny / norm;
    }
}

JobOutcome run_job(const JobSpec& job) {
    JobOutcome out;
    json& rep = out.report;
    rep["command"] = job.command;

    if (job.command == "tropicalize") {
        const ts::PLIntegralMap T = job.map.build();
        rep["map_input"] = job.map.describe();
        rep["map"] = ts::to_json(T);
        const ts::HomeoVerdict hv = ts::is_homeomorphism(T);
        rep["homeomorphism"] = hv.accepted;
        if (hv.accepted)
            rep["orientation"] =
                hv.orientation == ts::Orientation::preserving ? "preserving" : "reversing";
        else
            rep["diagnostic"] = hv.diagnostic;
        return out;
    }

    if (job.command == "rotation") {
        const ts::PLIntegralMap T = job.map.build();
        const ts::RotationCertificate cert = ts::exact_rotation(T, job.max_period);
        rep["certificate"] = ts::to_json(cert);
        if (cert.kind != ts::RotationCertificate::Kind::orientation_reversing)
            rep["numeric_estimate"] = ts::numeric_rotation(T, job.iterations, job.seed);
        if (cert.kind == ts::RotationCertificate::Kind::undetermined) {
            out.exit_code = 3;
            if (job.denjoy) {
                try {
                    rep["denjoy"] = ts::to_json(ts::denjoy_statement_check(T, job.max_period,
                                                                           job.iterations));
                } catch (const std::invalid_argument& e) {
                    rep["denjoy"] = json{{"skipped", e.what()}};
                }
            }
        }
        if (!job.rays_csv_path.empty()) emit_rays_csv(T, job);
        return out;
    }

    if (job.command == "stability") {
        const ts::PLIntegralMap T = job.map.build();
        const ts::ToricModel model(job.fan, T);
        const ts::StabilityReport report = ts::find_destabilizing_orbits(model, job.bound);
        rep["fan"] = ts::to_json(job.fan);
        rep["report"] = ts::to_json(report);
        if (report.verdict == ts::StabilityReport::Verdict::unknown) out.exit_code = 3;
        return out;
    }

    if (job.command == "stabilize") {
        const ts::PLIntegralMap T = job.map.build();
        const ts::CorrigibilityVerdict v =
            ts::corrigibility_verdict(T, job.fan, {job.max_period, job.bound});
        rep["result"] = ts::to_json(v, job.fan);
        if (v.kind == ts::CorrigibilityVerdict::Kind::not_stabilizable) out.exit_code = 2;
        if (v.kind == ts::CorrigibilityVerdict::Kind::undetermined) out.exit_code = 3;
        // On request, probe whether smaller iterates already pass the
        // detector on the refined fan. Purely empirical: the certified
        // iterate is the one in the result.
        if (job.empirical_smaller && v.witness && v.iterate > 1) {
            json probes = json::array();
            for (unsigned k = 1; k < v.iterate; ++k) {
                const ts::StabilityReport probe = ts::find_destabilizing_orbits(
                    ts::ToricModel(v.witness->fan, ts::iterate(T, k)), job.bound);
                probes.push_back(json{{"iterate", k},
                                      {"verdict", ts::verdict_string(probe.verdict)},
                                      {"label", "empirical"}});
            }
            rep["empirical_smaller_iterates"] = probes;
        }
        return out;
    }

    if (job.command == "degrees") {
        if (!job.map.monomial)
            throw ParseFailure("degrees: defined for monomial maps only (--monomial)");
        const json deg = ts::to_json(ts::monomial_degrees(*job.map.monomial));
        for (auto it = deg.begin(); it != deg.end(); ++it) rep[it.key()] = it.value();
        return out;
    }

    if (job.command == "compose") {
        if (!job.second_map) throw ParseFailure("compose: second map input missing");
        const ts::PLIntegralMap T = job.map.build();
        const ts::PLIntegralMap S = job.second_map->build();
        const ts::PLIntegralMap C = ts::compose(T, S);
        rep["map"] = ts::to_json(C);
        const ts::HomeoVerdict hv = ts::is_homeomorphism(C);
        rep["homeomorphism"] = hv.accepted;
        if (hv.accepted)
            rep["orientation"] =
                hv.orientation == ts::Orientation::preserving ? "preserving" : "reversing";
        return out;
    }

    throw ParseFailure("unknown command: " + job.command);
}

// ---------------------------------------------------------------------------
// Corpus self-test
// ---------------------------------------------------------------------------

// expected is a subset of actual, recursively; floats compare to 1e-6.
bool subset_match(const json& expected, const json& actual, std::string& why,
                  const std::string& path) {
    if (expected.is_object()) {
        if (!actual.is_object()) {
            why = path + ": expected object";
            return false;
        }
        for (auto it = expected.begin(); it != expected.end(); ++it) {
            if (!actual.contains(it.key())) {
                why = path + "." + it.key() + ": missing";
                return false;
            }
            if (!subset_match(it.value(), actual[it.key()], why, path + "." + it.key()))
                return false;
        }
        return true;
    }
    if (expected.is_array()) {
        if (!actual.is_array() || actual.size() != expected.size()) {
            why = path + ": array mismatch";
            return false;
        }
        for (std::size_t i = 0; i < expected.size(); ++i)
            if (!subset_match(expected[i], actual[i], why, path + "[" + std::to_string(i) + "]"))
                return false;
        return true;
    }
    if (expected.is_number_float() || actual.is_number_float()) {
        if (!actual.is_number()) {
            why = path + ": expected number";
            return false;
        }
        if (std::fabs(expected.get<double>() - actual.get<double>()) > 1e-6) {
            why = path + ": " + actual.dump() + " != " + expected.dump();
            return false;
        }
        return true;
    }
    if (expected != actual) {
        why = path + ": " + actual.dump() + " != " + expected.dump();
        return false;
    }
    return true;
}

JobSpec job_from_json(const json& j) {
    JobSpec job;
    if (!j.contains("command") || !j["command"].is_string())
        throw ParseFailure("job: missing \"command\"");
    job.command = j["command"].get<std::string>();
    const bool has_monomial = j.contains("monomial");
    const bool has_map = j.contains("map");
    if (has_monomial == has_map && job.command != "self-test")
        throw ParseFailure("job: exactly one map input (\"monomial\" or \"map\") required");
    if (has_monomial) job.map.monomial = ts::matrix_from_json(j["monomial"]);
    if (has_map) job.map = ts::map_input_from_json(j["map"]);
    if (j.contains("map2")) job.second_map = ts::map_input_from_json(j["map2"]);
    if (j.contains("monomial2")) {
        ts::MapInput m;
        m.monomial = ts::matrix_from_json(j["monomial2"]);
        job.second_map = m;
    }
    if (j.contains("fan")) {
        if (j["fan"].is_string()) {
            const std::string f = j["fan"].get<std::string>();
            job.fan = (f == "p1xp1") ? ts::Fan::p1xp1()
                                     : (f == "p2" ? ts::Fan::p2() : ts::fan_from_text(f));
        } else {
            job.fan = ts::fan_from_json(j["fan"]);
        }
    }
    const json opts = j.value("options", json::object());
    job.max_period = opts.value("max_period", 24u);
    job.bound = opts.value("bound", 64u);
    job.iterations = opts.value("iterations", 10000u);
    if (opts.contains("seed"))
        job.seed = ts::RationalRay(ts::lattice_vector_from_json(opts["seed"]));
    if (job.max_period < 1 || job.max_period > 1000)
        throw ParseFailure("options.max_period out of range [1, 1000]");
    if (job.bound < 1 || job.bound > 10000)
        throw ParseFailure("options.bound out of range [1, 10000]");
    return job;
}

int run_self_test(const std::string& corpus_dir) {
    namespace fs = std::filesystem;
    json summary;
    summary["command"] = "self-test";
    summary["corpus"] = corpus_dir;
    json entries = json::array();
    unsigned failures = 0, count = 0;

    std::vector<fs::path> files;
    if (fs::exists(corpus_dir))
        for (const auto& e : fs::directory_iterator(corpus_dir))
            if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());

    for (const auto& path : files) {
        ++count;
        json entry;
        std::string name = path.stem().string();
        try {
            const json doc = json::parse(read_file(path.string()));
            name = doc.value("name", name);
            entry["name"] = name;
            const JobSpec job = job_from_json(doc.at("job"));
            const JobOutcome outcome = run_job(job);
            std::string why;
            const bool ok = subset_match(doc.at("expect"), outcome.report, why, "$");
            entry["pass"] = ok;
            if (!ok) {
                entry["mismatch"] = why;
                ++failures;
            }
        } catch (const std::exception& e) {
            entry["name"] = name;
            entry["pass"] = false;
            entry["error"] = e.what();
            ++failures;
        }
        entries.push_back(entry);
    }
    summary["entries"] = entries;
    summary["total"] = count;
    summary["failures"] = failures;
    if (count == 0) summary["warning"] = "corpus directory is empty; nothing verified";
    std::cout << summary.dump(2) << std::endl;
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toric stability toolkit: tropicalized ray maps, rotation numbers, "
                 "stability along the invariant form, fan stabilization"};
    app.require_subcommand(1);

    std::string monomial, map_arg, monomial2, map_arg2, fan_arg, corpus_dir = "corpus",
                            csv_path;
    unsigned max_period = 24, bound = 64, iterations = 10000;
    std::string seed_arg = "1 0";
    bool denjoy = false;

    auto add_map_opts = [&](CLI::App* cmd) {
        cmd->add_option("--monomial", monomial, "row-major matrix \"a b c d\"");
        cmd->add_option("--map", map_arg, "map JSON (inline or file path)");
    };
    auto add_fan_opt = [&](CLI::App* cmd) {
        cmd->add_option("--fan", fan_arg, "p2 | p1xp1 | fan file | inline pairs (default p2)");
    };

    CLI::App* c_trop = app.add_subcommand("tropicalize", "PL integral map from supports");
    add_map_opts(c_trop);

    CLI::App* c_rot = app.add_subcommand("rotation", "rotation number certificate");
    add_map_opts(c_rot);
    c_rot->add_option("--max-period", max_period, "periodic search bound (default 24)");
    c_rot->add_option("--iterations", iterations, "numeric iteration count (default 10000)");
    c_rot->add_option("--seed", seed_arg, "seed ray \"x y\" (default \"1 0\")");
    c_rot->add_flag("--denjoy", denjoy, "attach orbit-density report when undetermined");
    c_rot->add_option("--emit-rays-csv", csv_path, "dump orbit angles as CSV");

    CLI::App* c_stab = app.add_subcommand("stability", "destabilizing-orbit detector");
    add_map_opts(c_stab);
    add_fan_opt(c_stab);
    c_stab->add_option("--bound", bound, "sector iteration bound (default 64)");

    CLI::App* c_fix = app.add_subcommand("stabilize", "stabilizing fan refinement");
    add_map_opts(c_fix);
    add_fan_opt(c_fix);
    c_fix->add_option("--max-period", max_period, "periodic search bound (default 24)");
    c_fix->add_option("--bound", bound, "sector iteration bound (default 64)");
    bool empirical_smaller = false;
    c_fix->add_flag("--empirical-smaller", empirical_smaller,
                    "also run the detector for smaller iterates (informational)");

    CLI::App* c_deg = app.add_subcommand("degrees", "degree report for a monomial map");
    add_map_opts(c_deg);

    CLI::App* c_comp = app.add_subcommand("compose", "compose two maps");
    add_map_opts(c_comp);
    c_comp->add_option("--with-monomial", monomial2, "second map, matrix form");
    c_comp->add_option("--with-map", map_arg2, "second map, JSON form");

    CLI::App* c_self = app.add_subcommand("self-test", "replay the bundled example corpus");
    c_self->add_option("--corpus", corpus_dir, "corpus directory (default ./corpus)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "argument error: " << e.what() << std::endl;
        return 64;
    }

    try {
        if (c_self->parsed()) return run_self_test(corpus_dir);

        JobSpec job;
        job.command = app.get_subcommands().front()->get_name();
        job.map = parse_map_arg(monomial, map_arg);
        if (c_comp->parsed()) {
            if (monomial2.empty() && map_arg2.empty())
                throw ParseFailure("compose: give --with-monomial or --with-map");
            job.second_map = parse_map_arg(monomial2, map_arg2);
        }
        job.fan = parse_fan_arg(fan_arg);
        if (max_period < 1 || max_period > 1000)
            throw ParseFailure("--max-period out of range [1, 1000]");
        if (bound < 1 || bound > 10000) throw ParseFailure("--bound out of range [1, 10000]");
        job.max_period = max_period;
        job.bound = bound;
        job.iterations = iterations;
        job.denjoy = denjoy;
        job.empirical_smaller = empirical_smaller;
        job.rays_csv_path = csv_path;
        {
            std::istringstream in(seed_arg);
            long sx = 1, sy = 0;
            if (!(in >> sx >> sy)) throw ParseFailure("--seed: expected \"x y\"");
            job.seed = ts::RationalRay(sx, sy);
        }

        const auto t0 = std::chrono::steady_clock::now();
        const JobOutcome outcome = run_job(job);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        std::cout << outcome.report.dump(2) << std::endl;
        // timing goes to the error stream so the payload stays byte-stable
        std::cerr << "toricstab: elapsed " << ms << " ms" << std::endl;
        return outcome.exit_code;
    } catch (const ParseFailure& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 64;
    } catch (const ts::StabilizeError& e) {
        json err{{"error", e.what()}};
        json log = json::array();
        for (const auto& line : e.partial_log) log.push_back(line);
        err["partial_log"] = log;
        std::cout << err.dump(2) << std::endl;
        return 3;
    } catch (const std::overflow_error& e) {
        json err{{"error", e.what()}, {"hint", "raise TORICSTAB_MAX_BIGINT_BITS"}};
        std::cout << err.dump(2) << std::endl;
        return 1;
    } catch (const std::exception& e) {
        json err{{"error", e.what()}};
        std::cout << err.dump(2) << std::endl;
        return 1;
    }
}
