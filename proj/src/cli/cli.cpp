#include "oobleck/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "oobleck/fleet/fleet.hpp"
#include "oobleck/pipeline/io.hpp"
#include "oobleck/pipeline/pipeline.hpp"
#include "oobleck/pipeline/sweep.hpp"
#include "oobleck/visc/visc.hpp"

namespace oobleck {
namespace {

// Raised for bad input data, as opposed to malformed command lines.
struct Diagnostic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Diagnostic(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Diagnostic(path + ": cannot open file for writing");
    f << text;
    if (!f) throw Diagnostic(path + ": write failed");
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

visc::CompiledModule compile_file(const std::string& path) {
    const std::string source = read_file(path);
    try {
        return visc::compile(source);
    } catch (const visc::CompileError& e) {
        throw Diagnostic(path + ":" + e.what());
    }
}

// compile ---------------------------------------------------------------------

struct CompileArgs {
    std::string file;
    std::string emit;
    std::string output;
};

void do_compile(const CompileArgs& a, std::ostream& out) {
    const visc::CompiledModule m = compile_file(a.file);
    std::string text;
    std::string ext;
    try {
        if (a.emit == "sw") {
            text = visc::emit_software(m.typed);
            ext = ".c";
        } else if (a.emit == "hdl") {
            text = visc::emit_hdl(m.typed);
            ext = ".v";
        } else if (a.emit == "iface") {
            text = visc::emit_interface_descriptor(m.typed);
            ext = ".iface.json";
        } else {
            text = visc::dump(m.ir);
            ext = ".ir";
        }
    } catch (const visc::CompileError& e) {
        throw Diagnostic(a.file + ":" + e.what());
    }
    write_text(a.output.empty() ? m.ir.name + ext : a.output, text, out);
}

// run -------------------------------------------------------------------------

struct RunArgs {
    std::string file;
    std::string inputs;
    std::uint64_t max_cycles = 1000;
};

void do_run(const RunArgs& a, std::ostream& out) {
    const visc::CompiledModule m = compile_file(a.file);
    visc::ValueMap inputs;
    for (const std::string& item : split_top_level(a.inputs, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Diagnostic("input `" + item + "` is not of the form name=value");
        const std::string name = item.substr(0, eq);
        const visc::PortDef* port = nullptr;
        for (const visc::PortDef& p : m.ir.inputs) {
            if (p.name == name) port = &p;
        }
        if (!port) throw Diagnostic("module `" + m.ir.name + "` has no input `" + name + "`");
        try {
            inputs[name] = visc::parse_value(item.substr(eq + 1), port->type);
        } catch (const std::invalid_argument& e) {
            throw Diagnostic("input `" + name + "`: " + e.what());
        }
    }
    try {
        const visc::RunResult r = visc::run_until_valid(m.ir, inputs, a.max_cycles);
        for (const visc::PortDef& p : m.ir.outputs) out << p.name << '=' << visc::to_string(r.outputs.at(p.name)) << ' ';
        out << "cycles=" << r.cycles << " valid=true\n";
    } catch (const visc::RuntimeError& e) {
        throw Diagnostic(a.file + ": " + e.what());
    }
}

// pipeline ------------------------------------------------------------------

struct PipelineArgs {
    std::uint64_t sw_cycles = 0;
    std::size_t stages = 0;
    double speedup = 100.0;
    std::uint64_t transmission = 0;
    std::string faults;
    std::string fallback = "sw";
    double fpga_speedup = 35.0;
    std::string routing = "through-sw";
    std::optional<std::uint64_t> hw_per_stage;
    std::string sweep;
    std::string scenario;
    std::string csv;
    std::string points;
    double bound = 0.10;
};

pipeline::Fallback fallback_from(const std::string& s) {
    return s == "fpga" ? pipeline::Fallback::Fpga : pipeline::Fallback::Software;
}

pipeline::FpgaRouting routing_from(const std::string& s) {
    return s == "direct" ? pipeline::FpgaRouting::Direct : pipeline::FpgaRouting::ThroughSoftware;
}

std::vector<std::size_t> parse_fault_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const std::string& item : split_top_level(text, ',')) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw Diagnostic("`" + item + "` in --faults is not a stage index");
        out.push_back(v);
    }
    return out;
}

void print_breakdown(std::ostream& out, const pipeline::PipelineSpec& p, const pipeline::FaultScenario& f,
                     const pipeline::LatencyParams& l) {
    const pipeline::CycleBreakdown b = pipeline::total_cycles(p, f, l);
    const double s = static_cast<double>(p.sw_total_cycles()) / static_cast<double>(b.total_cycles);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", s);
    out << "speedup=" << buf << " total_cycles=" << b.total_cycles << " hw_cycles=" << b.hw_cycles
        << " fallback_cycles=" << b.fallback_cycles << " crossing_cycles=" << b.crossing_cycles
        << " healthy_segments=" << b.healthy_segments << '\n';
    out << "config";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (f.is_faulted(i)) {
            out << " --";
        } else {
            const auto bits = pipeline::config_bits(f, p, i);
            out << ' ' << ((bits >> 1) & 1) << (bits & 1);
        }
    }
    out << '\n';
}

void do_pipeline(const PipelineArgs& a, bool sweep_given, std::ostream& out) {
    try {
        if (!a.scenario.empty()) {
            const pipeline::ScenarioFile sf = pipeline::parse_scenario_json(read_file(a.scenario));
            print_breakdown(out, sf.pipeline, sf.faults, sf.latency);
            return;
        }
        if (sweep_given) {
            pipeline::SweepGrid base;
            base.sw_cycles = {a.sw_cycles};
            base.stages = {a.stages};
            base.speedups = {a.speedup};
            base.transmissions = {a.transmission};
            base.fault_counts = {a.faults.empty() ? 0 : parse_fault_list(a.faults).size()};
            base.fallbacks = {fallback_from(a.fallback)};
            base.routings = {routing_from(a.routing)};
            base.fpga_speedups = {a.fpga_speedup};
            base.hw_per_stage = a.hw_per_stage;
            const pipeline::SweepGrid g = pipeline::parse_grid_spec(a.sweep, base);
            std::ostringstream csv;
            pipeline::write_csv(csv, pipeline::sweep(g));
            write_text(a.csv.empty() ? "-" : a.csv, csv.str(), out);
            return;
        }

        if (a.sw_cycles == 0 || a.stages == 0) {
            throw Diagnostic("pipeline needs --sw-cycles and --stages (or --scenario FILE)");
        }
        const pipeline::PipelineSpec p =
            pipeline::PipelineSpec::uniform(a.sw_cycles, a.stages, a.speedup, a.hw_per_stage);
        const pipeline::FaultScenario f =
            pipeline::FaultScenario::with(parse_fault_list(a.faults), fallback_from(a.fallback));
        pipeline::LatencyParams l;
        l.transmission = a.transmission;
        l.fpga_speedup = a.fpga_speedup;
        l.routing = routing_from(a.routing);
        print_breakdown(out, p, f, l);
        if (!a.csv.empty()) {
            pipeline::SweepRow r;
            r.sw_cycles = a.sw_cycles;
            r.stages = a.stages;
            r.hw_speedup = a.speedup;
            r.transmission = a.transmission;
            r.fault_count = f.faults.size();
            r.fallback = fallback_from(a.fallback);
            r.fpga_speedup = a.fpga_speedup;
            r.routing = l.routing;
            for (const auto& [i, fb] : f.faults) r.fault_stages.push_back(i);
            r.breakdown = pipeline::total_cycles(p, f, l);
            r.speedup = pipeline::speedup(p, f, l);
            std::ostringstream csv;
            pipeline::write_csv(csv, {r});
            write_text(a.csv, csv.str(), out);
        }
    } catch (const pipeline::PipelineError& e) {
        throw Diagnostic(e.what());
    } catch (const std::invalid_argument& e) {
        throw Diagnostic(e.what());
    }
}

void do_calibrate(const PipelineArgs& a, std::ostream& out) {
    try {
        const auto obs = pipeline::parse_observations_json(read_file(a.points));
        pipeline::CalibrationOptions opt;
        opt.max_relative_residual = a.bound;
        const pipeline::CalibrationResult r = pipeline::calibrate_transmission(obs, opt);
        out << "T=" << r.transmission << '\n';
        out << "label,target,predicted,residual\n";
        for (std::size_t i = 0; i < obs.size(); ++i) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.6f,%.6f,%+.6f", obs[i].target_speedup, r.predicted[i], r.residuals[i]);
            out << obs[i].label << ',' << buf << '\n';
        }
    } catch (const pipeline::PipelineError& e) {
        throw Diagnostic(e.what());
    } catch (const std::invalid_argument& e) {
        throw Diagnostic(a.points + ": " + e.what());
    }
}

// fleet ---------------------------------------------------------------------

struct FleetArgs {
    std::uint64_t chips = 10'000;
    std::uint64_t ticks = 1'460;
    double fault_prob = 0.0;
    std::string mode = "vfa";
    std::uint32_t max_faults = 3;
    std::vector<double> degradation;
    std::uint64_t seeds = 1;
    std::uint64_t seed = 0;
    double target = -1.0;
    std::string csv;
};

void do_fleet(const FleetArgs& a, fleet::Regime regime, std::ostream& out) {
    fleet::DcScenario s;
    s.chips = a.chips;
    s.ticks = a.ticks;
    s.fault_prob = a.fault_prob;
    s.mode = a.mode == "sfa" ? fleet::Mode::Sfa : fleet::Mode::Vfa;
    s.max_faults = a.max_faults;
    if (!a.degradation.empty()) {
        s.degradation = a.degradation;
    } else {
        // Default schedule: full speed, then 1/2, then 1/3 of it, and so on.
        s.degradation.clear();
        for (std::uint32_t k = 0; k < a.max_faults; ++k) s.degradation.push_back(1.0 / (k + 1));
    }
    s.regime = regime;
    s.throughput_target = a.target;
    s.seed = a.seed;

    std::vector<fleet::FleetResult> results;
    try {
        results = fleet::simulate_seeds(s, a.seeds);
    } catch (const std::invalid_argument& e) {
        throw Diagnostic(e.what());
    }

    double count = 0;
    double agg = 0;
    for (const auto& r : results) {
        count += static_cast<double>(r.replacements_or_purchases);
        agg += r.aggregate_throughput;
    }
    const double n = static_cast<double>(results.size());
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.6g aggregate_throughput=%.6f",
                  regime == fleet::Regime::FixedTime ? "mean_replacements" : "mean_purchases", count / n, agg / n);
    out << "mode=" << fleet::to_string(s.mode) << " regime=" << fleet::to_string(regime) << " seeds=" << a.seeds << ' '
        << buf << '\n';

    if (!a.csv.empty()) {
        std::string text = std::string(fleet::kFleetCsvHeader) + '\n';
        for (std::size_t i = 0; i < results.size(); ++i) text += fleet::csv_line(s, s.seed + i, results[i]) + '\n';
        write_text(a.csv, text, out);
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Viscosity compiler, Oobleck pipeline model, and fleet simulator", "oobleck"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand help for every subcommand");

    CompileArgs ca;
    auto* compile = app.add_subcommand("compile", "Compile a .visc module to C, Verilog, an interface descriptor, or IR");
    compile->add_option("FILE", ca.file, "Viscosity source file")->required();
    compile->add_option("--emit", ca.emit, "Output kind")->required()->check(CLI::IsMember({"sw", "hdl", "iface", "ir"}));
    compile->add_option("-o,--output", ca.output,
                        "Output path; `-` for standard output (default: <name>.c, .v, .iface.json, or .ir)");

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Interpret a module with constant inputs until it signals valid");
    run->add_option("FILE", ra.file, "Viscosity source file")->required();
    run->add_option("--inputs", ra.inputs, "Comma-separated name=value list; arrays as [a:b:c]");
    run->add_option("--max-cycles", ra.max_cycles, "Cycle budget before giving up")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    PipelineArgs pa;
    auto* pipe = app.add_subcommand("pipeline", "Cycle model of a staged accelerator under faults");
    pipe->add_option("--sw-cycles", pa.sw_cycles, "Cumulative software cycles C");
    pipe->add_option("--stages", pa.stages, "Number of stages n");
    pipe->add_option("--speedup", pa.speedup, "Hardware speedup over software S")->capture_default_str();
    pipe->add_option("--transmission", pa.transmission, "Cycles per software/hardware crossing T")->capture_default_str();
    pipe->add_option("--faults", pa.faults, "Comma-separated indices of faulted stages");
    pipe->add_option("--fallback", pa.fallback, "Where faulted stages run")
        ->capture_default_str()
        ->check(CLI::IsMember({"sw", "fpga"}));
    pipe->add_option("--fpga-speedup", pa.fpga_speedup, "FPGA speedup over software, in [35, 200]")->capture_default_str();
    pipe->add_option("--fpga-routing", pa.routing, "How data reaches the FPGA")
        ->capture_default_str()
        ->check(CLI::IsMember({"through-sw", "direct"}));
    pipe->add_option("--hw-cycles-per-stage", pa.hw_per_stage, "Fixed hardware cycles per stage instead of C/(n*S)");
    auto* sweep_opt = pipe->add_option("--sweep", pa.sweep,
                                       "Grid such as `C=30000:300000:30000;n=6,12,18;faults=1;placement=spread`. "
                                       "Keys: C n S T faults placement fallback s routing hw. Unset axes come from "
                                       "the other flags");
    pipe->add_option("--scenario", pa.scenario, "JSON scenario file instead of flags");
    pipe->add_option("--csv", pa.csv, "Write CSV here (`-` for standard output)");

    auto* calibrate = pipe->add_subcommand("calibrate", "Fit the transmission latency T to observed speedups");
    calibrate->add_option("--points", pa.points, "JSON file of observations")->required();
    calibrate->add_option("--bound", pa.bound, "Largest tolerated relative residual")->capture_default_str();

    FleetArgs fa;
    auto* fleet_cmd = app.add_subcommand("fleet", "Monte Carlo data-center fault model");
    fleet_cmd->require_subcommand(1);
    auto add_fleet_flags = [&fa](CLI::App* sub) {
        sub->add_option("--chips", fa.chips, "Chips in the fleet N")->capture_default_str();
        sub->add_option("--ticks", fa.ticks, "Simulated ticks")->capture_default_str();
        sub->add_option("--fault-prob", fa.fault_prob, "Fault probability per chip per tick")
            ->required()
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--mode", fa.mode, "Accelerator kind")->required()->check(CLI::IsMember({"sfa", "vfa"}));
        sub->add_option("--max-faults", fa.max_faults, "Faults that kill a VFA")->capture_default_str();
        sub->add_option("--degradation", fa.degradation,
                        "Comma-separated VFA throughput per fault level (default 1, 1/2, 1/3, ...)")
            ->delimiter(',');
        sub->add_option("--seeds", fa.seeds, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--seed", fa.seed, "First seed")->capture_default_str();
        sub->add_option("--csv", fa.csv, "Write per-seed CSV here (`-` for standard output)");
    };
    auto* fixed_time = fleet_cmd->add_subcommand("fixed-time", "Fixed chip count; counts replacements");
    add_fleet_flags(fixed_time);
    auto* fixed_tp = fleet_cmd->add_subcommand("fixed-throughput", "Fixed throughput target; counts purchases");
    add_fleet_flags(fixed_tp);
    fixed_tp->add_option("--target", fa.target, "Throughput target in chip equivalents (default: --chips)");

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and --help-all
            app.exit(e, out, err);
            return 0;
        }
        err << "oobleck: " << e.what() << '\n';
        err << "Run with --help for usage.\n";
        return 1;
    }

    try {
        if (*compile) {
            do_compile(ca, out);
        } else if (*run) {
            do_run(ra, out);
        } else if (*pipe) {
            if (*calibrate) {
                do_calibrate(pa, out);
            } else {
                do_pipeline(pa, sweep_opt->count() > 0, out);
            }
        } else if (*fixed_time) {
            do_fleet(fa, fleet::Regime::FixedTime, out);
        } else if (*fixed_tp) {
            do_fleet(fa, fleet::Regime::FixedThroughput, out);
        }
    } catch (const Diagnostic& e) {
        err << "oobleck: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace oobleck
