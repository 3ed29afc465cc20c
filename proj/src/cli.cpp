#include "forsage/cli.hpp"

#include "forsage/analytics.hpp"
#include "forsage/digest.hpp"
#include "forsage/dot_export.hpp"
#include "forsage/report_json.hpp"
#include "forsage/simulation.hpp"
#include "forsage/txlog.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace forsage::cli {

namespace {

    struct CommandError {
        int exit_code;
        std::string code;
        std::string message;
        std::optional<std::uint64_t> ordinal;
    };

    std::string escape(const std::string& s)
    {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\')
                out += '\\';
            out += (c == '\n') ? ' ' : c;
        }
        return out;
    }

    std::string read_file(const std::string& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw CommandError { kIoFailure, "io-error", "cannot open " + path, std::nullopt };
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad())
            throw CommandError { kIoFailure, "io-error", "cannot read " + path, std::nullopt };
        return buf.str();
    }

    void write_file(const std::string& path, const std::string& content)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw CommandError { kIoFailure, "io-error", "cannot open " + path + " for writing", std::nullopt };
        out << content;
        out.close();
        if (!out)
            throw CommandError { kIoFailure, "io-error", "cannot write " + path, std::nullopt };
    }

    void emit(std::ostream& out, const std::string& path, const std::string& content)
    {
        if (path.empty())
            out << content;
        else
            write_file(path, content);
    }

    Wei parse_wei_arg(const std::string& text, const std::string& flag)
    {
        try {
            return Wei::parse(text);
        } catch (const AmountError& e) {
            throw CommandError { kBadArguments, "bad-arguments", flag + ": " + e.what(), std::nullopt };
        }
    }

    struct FeeArgs {
        std::string kind = "constant";
        std::string mean = kDefaultMeanFee.to_string();
        std::string median = kDefaultMedianFee.to_string();

        void attach(CLI::App* app)
        {
            app->add_option("--fee-model", kind, "Fee model for records without a fee")
                ->check(CLI::IsMember({ "constant", "lognormal" }));
            app->add_option("--mean-fee-wei", mean, "Mean fee in wei");
            app->add_option("--median-fee-wei", median, "Median fee in wei (lognormal)");
        }

        FeeModel model() const
        {
            FeeModel m;
            m.kind = *parse_fee_kind(kind);
            m.mean = parse_wei_arg(mean, "--mean-fee-wei");
            m.median = m.kind == FeeKind::Constant ? m.mean : parse_wei_arg(median, "--median-fee-wei");
            try {
                m.validate();
            } catch (const std::invalid_argument& e) {
                throw CommandError { kBadArguments, "bad-arguments", e.what(), std::nullopt };
            }
            return m;
        }
    };

    struct ReplayArgs {
        std::string input;
        std::string owner = default_owner_address().value;
        bool strict = false;
        bool lenient = false;
        std::string skip_log;

        void attach(CLI::App* app)
        {
            app->add_option("--in", input, "Transaction log (CSV)")->required();
            app->add_option("--owner", owner, "Contract owner address");
            auto* s = app->add_flag("--strict", strict, "Stop at the first rejected record (default)");
            auto* l = app->add_flag("--lenient", lenient, "Skip rejected records and log them");
            s->excludes(l);
            app->add_option("--skip-log", skip_log, "Sidecar CSV for records skipped in lenient mode");
        }

        struct Outcome {
            ContractState state;
            ReplayResult result;
        };

        Outcome execute() const
        {
            if (lenient && skip_log.empty())
                throw CommandError { kBadArguments, "bad-arguments", "--lenient requires --skip-log", std::nullopt };
            const auto text = read_file(input);
            std::vector<TxRecord> records;
            try {
                records = parse_txlog(text);
            } catch (const ParseError& e) {
                throw CommandError { kIoFailure, std::string(to_string(e.code())), e.what(), std::nullopt };
            }
            Outcome o { ContractState(Address { owner }), {} };
            try {
                o.result = replay(o.state, records, lenient ? ReplayMode::Lenient : ReplayMode::Strict);
            } catch (const ReplayError& e) {
                throw CommandError { kReplayFailure, std::string(to_string(e.code())), e.what(), e.ordinal() };
            }
            if (lenient)
                write_file(skip_log, serialize_skip_log(o.result.skipped));
            return o;
        }
    };

} // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app { "Deterministic Forsage matrix contract model: simulate, replay, analyze, visualize", "forsage" };
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    // simulate
    RecruitmentModel model;
    std::string sim_kind = "uniform";
    std::optional<std::uint64_t> sim_seed;
    std::string sim_out;
    std::size_t sim_top = kDefaultTopK;
    std::string sim_owner = default_owner_address().value;
    FeeArgs sim_fees;
    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a seeded schedule and run it");
    simulate_cmd->add_option("--seed", sim_seed, "Generator seed")->required();
    simulate_cmd->add_option("--arrivals", model.arrivals, "Number of registrations")->default_val(1000);
    simulate_cmd->add_option("--model", sim_kind, "Recruitment model")->check(CLI::IsMember({ "uniform", "preferential", "chain" }));
    simulate_cmd->add_option("--purchase-prob", model.purchase.probability, "Chance of buying the next level after a fill")
        ->check(CLI::Range(0.0, 1.0));
    simulate_cmd->add_option("--max-level", model.purchase.max_level, "Highest level simulated users buy")->check(CLI::Range(1, 12));
    simulate_cmd->add_option("--out", sim_out, "Output directory (schedule.csv, events.csv, report.json)")->required();
    simulate_cmd->add_option("--top", sim_top, "Rows in the top earners table")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--owner", sim_owner, "Contract owner address");
    sim_fees.attach(simulate_cmd);

    // replay
    ReplayArgs replay_args;
    std::string replay_out;
    auto* replay_cmd = app.add_subcommand("replay", "Replay a transaction log; print the final state digest");
    replay_args.attach(replay_cmd);
    replay_cmd->add_option("--out", replay_out, "Payment events CSV");

    // analyze
    ReplayArgs analyze_args;
    std::string analyze_out;
    std::size_t analyze_top = kDefaultTopK;
    FeeArgs analyze_fees;
    auto* analyze_cmd = app.add_subcommand("analyze", "Replay a log and write the JSON profit report");
    analyze_args.attach(analyze_cmd);
    analyze_cmd->add_option("--out", analyze_out, "Report path (stdout when omitted)");
    analyze_cmd->add_option("--top", analyze_top, "Rows in the top earners table")->check(CLI::PositiveNumber);
    analyze_fees.attach(analyze_cmd);

    // visualize
    ReplayArgs viz_args;
    std::string viz_out;
    std::string viz_matrix = "x3";
    int viz_level = 1;
    std::string viz_focus;
    auto* viz_cmd = app.add_subcommand("visualize", "Replay a log and write a GraphViz DOT slot tree");
    viz_args.attach(viz_cmd);
    viz_cmd->add_option("--out", viz_out, "DOT path (stdout when omitted)");
    viz_cmd->add_option("--matrix", viz_matrix, "Matrix")->check(CLI::IsMember({ "x3", "x4" }));
    viz_cmd->add_option("--level", viz_level, "Slot level")->check(CLI::Range(1, 12));
    viz_cmd->add_option("--focus", viz_focus, "Restrict to this user's subtree");

    std::vector<std::string> argv;
    argv.reserve(args.size());
    for (auto it = args.rbegin(); it != args.rend(); ++it)
        argv.push_back(*it);

    try {
        try {
            app.parse(argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kOk;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kOk;
        } catch (const CLI::ParseError& e) {
            throw CommandError { kBadArguments, "bad-arguments", e.what(), std::nullopt };
        }

        if (simulate_cmd->parsed()) {
            model.kind = *parse_recruitment(sim_kind);
            model.seed = *sim_seed;
            model.fees = sim_fees.model();
            model.owner = Address { sim_owner };
            std::error_code ec;
            std::filesystem::create_directories(sim_out, ec);
            if (ec)
                throw CommandError { kIoFailure, "io-error", "cannot create " + sim_out + ": " + ec.message(), std::nullopt };
            std::vector<TxRecord> schedule;
            std::optional<SimResult> sim;
            try {
                schedule = build_schedule(model);
                sim.emplace(run(schedule, model.owner));
            } catch (const ReplayError& e) {
                throw CommandError { kReplayFailure, std::string(to_string(e.code())), e.what(), e.ordinal() };
            }
            const SimResult& result = *sim;
            const auto dir = std::filesystem::path(sim_out);
            write_file((dir / "schedule.csv").string(), serialize_txlog(schedule));
            write_file((dir / "events.csv").string(), serialize_events(result.events));
            const auto report = build_report(result.events, result.log, model.fees, &result.state, sim_top);
            write_file((dir / "report.json").string(), export_report(report));
            out << "digest " << state_digest(result.state) << "\n";
            out << "transactions " << schedule.size() << " events " << result.events.size() << " rng "
                << result.rng_algorithm << " seed " << model.seed << "\n";
        } else if (replay_cmd->parsed()) {
            const auto o = replay_args.execute();
            if (!replay_out.empty())
                write_file(replay_out, serialize_events(o.result.events));
            out << "digest " << state_digest(o.state) << "\n";
            if (!o.result.skipped.empty())
                out << "skipped " << o.result.skipped.size() << "\n";
        } else if (analyze_cmd->parsed()) {
            const auto fees = analyze_fees.model();
            const auto o = analyze_args.execute();
            const auto report = build_report(o.result.events, o.result.applied, fees, &o.state, analyze_top);
            emit(out, analyze_out, export_report(report));
        } else if (viz_cmd->parsed()) {
            const auto o = viz_args.execute();
            std::optional<Address> focus;
            if (!viz_focus.empty())
                focus = Address { viz_focus };
            std::string dot;
            try {
                dot = export_dot(o.state, focus, *parse_matrix(viz_matrix), Level(viz_level));
            } catch (const ContractError& e) {
                throw CommandError { kBadArguments, "unknown-focus", e.what(), std::nullopt };
            }
            emit(out, viz_out, dot);
        }
        return kOk;
    } catch (const CommandError& e) {
        err << "error code=" << e.code;
        if (e.ordinal)
            err << " ordinal=" << *e.ordinal;
        err << " message=\"" << escape(e.message) << "\"\n";
        return e.exit_code;
    }
}

} // namespace forsage::cli
