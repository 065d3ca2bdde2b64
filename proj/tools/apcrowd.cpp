// apcrowd command-line tool.
//
// Exit codes: 0 success, 1 usage error, 2 configuration error, 3 data error.

#include <apcrowd/apcrowd.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace apcrowd;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kData = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

// Writes through `fn` to `path`, or to stdout when the path is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    auto out = open_out(path);
    fn(out);
    if (!out) throw DataError("write to '" + path + "' failed");
}

ConfigTree config_from(const std::string& path) {
    if (path.empty()) return {};
    auto in = open_in(path);
    return read_config(in);
}

ParseMode mode_of(bool strict) { return strict ? ParseMode::Strict : ParseMode::Lenient; }

void report_row_errors(const std::vector<RowError>& errors) {
    for (const auto& e : errors) std::cerr << "warning: line " << e.line << ": " << e.message << " (row skipped)\n";
}

// Reads a connection log. Files with the raw identity header are anonymized on the way in.
std::vector<ConnectionRecord> read_logs(const std::string& path, bool strict, std::uint64_t seed) {
    auto in = open_in(path);
    std::string header;
    std::getline(in, header);
    in.clear();
    in.seekg(0);
    // Raw logs may carry extra identity columns after the four named ones.
    const auto h = detail::chomp(header);
    if (h == kRawLogHeader || h.starts_with(std::string(kRawLogHeader) + ",")) {
        auto raw = parse_raw_csv(in, mode_of(strict));
        report_row_errors(raw.errors);
        return anonymize(raw.records, seed);
    }
    auto res = parse_log_csv(in, mode_of(strict));
    report_row_errors(res.errors);
    return res.records;
}

std::vector<RawRecord> read_raw_logs(const std::string& path, bool strict) {
    auto in = open_in(path);
    auto res = parse_raw_csv(in, mode_of(strict));
    report_row_errors(res.errors);
    return res.records;
}

std::vector<std::string> split_models(const std::string& list, const learn::ModelRegistry& reg) {
    if (list == "all") return reg.names();
    std::vector<std::string> out;
    std::stringstream ss(list);
    for (std::string m; std::getline(ss, m, ',');)
        if (!m.empty()) out.push_back(m);
    if (out.empty()) throw UsageError("--models needs at least one model name");
    for (const auto& m : out) reg.get(m);  // unknown names fail before any work starts
    return out;
}

std::vector<TaskSpec> task_specs(const std::vector<std::string>& names, const ConfigTree& schedule_tree) {
    std::vector<TaskSpec> out;
    for (const auto& n : names) {
        auto t = parse_task(n);
        if (!t) throw UsageError("unknown task '" + n + "' (expected break or endofclass)");
        out.push_back(load_task_spec(schedule_tree, *t));
    }
    return out;
}

std::vector<Date> simulation_days(const SimulatorConfig& cfg, const std::string& start, std::size_t mornings,
                                  std::size_t days) {
    auto from = parse_date(start);
    if (!from) throw UsageError("--start must be YYYY-MM-DD");
    if (days > 0) {
        std::vector<Date> out;
        for (std::size_t i = 0; i < days; ++i)
            out.push_back(Date{std::chrono::sys_days{*from} + std::chrono::days{static_cast<int>(i)}});
        return out;
    }
    auto out = class_days(cfg.schedule, *from, mornings);
    if (out.size() < mornings) throw ConfigError("the schedule calendar ends before " + std::to_string(mornings) + " class days");
    return out;
}

void print_summary(std::ostream& os, const std::vector<learn::EvalEntry>& entries) {
    std::map<std::string, std::vector<learn::EvalEntry>> by_task;
    std::vector<std::string> order;
    for (const auto& e : entries) {
        if (!by_task.contains(e.task)) order.push_back(e.task);
        by_task[e.task].push_back(e);
    }
    for (const auto& t : order) {
        const auto* best = top_entry(by_task[t]);
        os << "top model for " << t << ": " << best->model << " (accuracy " << learn::format_fixed(best->accuracy, 4) << ")\n";
    }
}

struct Common {
    std::uint64_t seed = 0;
    bool strict = false;
    std::string schedule;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"apcrowd: crowd-pattern detection from WiFi association logs"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common common;
    auto add_seed = [&](CLI::App* c) { c->add_option("--seed", common.seed, "Master seed (default 0)"); };
    auto add_strict = [&](CLI::App* c) { c->add_flag("--strict", common.strict, "Abort on the first malformed row"); };
    auto add_schedule = [&](CLI::App* c) {
        c->add_option("--schedule", common.schedule, "Schedule file ([schedule] and [labels] sections)")
            ->check(CLI::ExistingFile);
    };

    // simulate
    std::string sim_config, sim_out, sim_start = "2017-04-03";
    std::size_t sim_mornings = 1, sim_days = 0;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic raw connection log");
    simulate->add_option("--config", sim_config, "Simulator config file")->check(CLI::ExistingFile);
    simulate->add_option("--start", sim_start, "First date considered (YYYY-MM-DD)");
    simulate->add_option("--mornings", sim_mornings, "Number of class days to simulate");
    simulate->add_option("--days", sim_days, "Simulate this many consecutive calendar days instead");
    simulate->add_option("--out", sim_out, "Output CSV (default stdout)");
    add_seed(simulate);

    // validate
    std::string val_in;
    auto* validate = app.add_subcommand("validate", "Check a connection log for structural problems");
    validate->add_option("--in,--logs", val_in, "Connection log CSV")->required()->check(CLI::ExistingFile);
    add_strict(validate);
    add_seed(validate);

    // featurize
    std::string feat_in, feat_out, feat_roster;
    auto* featurize_cmd = app.add_subcommand("featurize", "Turn a connection log into per-minute AP statistics");
    featurize_cmd->add_option("--in,--logs", feat_in, "Connection log CSV (raw logs are anonymized first)")
        ->required()
        ->check(CLI::ExistingFile);
    featurize_cmd->add_option("--out", feat_out, "Feature CSV (default stdout)");
    featurize_cmd->add_option("--roster", feat_roster, "Also write the AP roster, one id per line");
    add_strict(featurize_cmd);
    add_seed(featurize_cmd);

    // label
    std::string lab_in, lab_out, lab_task = "break";
    auto* label = app.add_subcommand("label", "Label in-scope minutes of a feature CSV");
    label->add_option("--in", lab_in, "Feature CSV")->required()->check(CLI::ExistingFile);
    label->add_option("--task", lab_task, "break or endofclass");
    label->add_option("--out", lab_out, "Labeled CSV (default stdout)");
    add_schedule(label);

    // train
    std::string tr_in, tr_out, tr_model = "bagged";
    bool tr_no_balance = false;
    auto* train = app.add_subcommand("train", "Train one model on a labeled CSV and save it as JSON");
    train->add_option("--in", tr_in, "Labeled CSV")->required()->check(CLI::ExistingFile);
    train->add_option("--model", tr_model, "Model name");
    train->add_option("--out", tr_out, "Model JSON (default stdout)");
    train->add_flag("--no-balance", tr_no_balance, "Train on all rows instead of a balanced subsample");
    add_seed(train);

    // evaluate
    std::string ev_in, ev_out, ev_models = "all";
    std::vector<std::string> ev_tasks;
    std::size_t ev_folds = 10;
    std::optional<std::size_t> ev_pca;
    auto* evaluate = app.add_subcommand("evaluate", "Cross-validate models on a feature CSV");
    evaluate->add_option("--in", ev_in, "Feature CSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--task", ev_tasks, "break and/or endofclass (repeatable; default both)");
    evaluate->add_option("--models", ev_models, "Comma-separated model names, or 'all'");
    evaluate->add_option("--folds", ev_folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
    evaluate->add_option("--pca", ev_pca, "Project onto this many principal components first");
    evaluate->add_option("--out", ev_out, "Report TSV (default stdout)");
    add_schedule(evaluate);
    add_seed(evaluate);

    // run
    std::string run_config, run_logs, run_out, run_start = "2017-04-03", run_models = "all";
    std::vector<std::string> run_tasks;
    std::size_t run_mornings = 4, run_folds = 10;
    std::optional<std::size_t> run_pca;
    auto* run = app.add_subcommand("run", "Simulate (or read) logs and evaluate models end to end");
    run->add_option("--config", run_config, "Simulator config file")->check(CLI::ExistingFile);
    run->add_option("--logs", run_logs, "Use this raw log CSV instead of simulating")->check(CLI::ExistingFile);
    run->add_option("--start", run_start, "First date considered when simulating");
    run->add_option("--mornings", run_mornings, "Class days to simulate");
    run->add_option("--task", run_tasks, "break and/or endofclass (repeatable; default both)");
    run->add_option("--models", run_models, "Comma-separated model names, or 'all'");
    run->add_option("--folds", run_folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
    run->add_option("--pca", run_pca, "Project onto this many principal components first");
    run->add_option("--out", run_out, "Report TSV (default stdout)");
    add_schedule(run);
    add_strict(run);
    add_seed(run);

    // report
    std::vector<std::string> rep_in;
    auto* report = app.add_subcommand("report", "Merge report TSVs into one comparison table");
    report->add_option("reports", rep_in, "Report TSV files")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const auto registry = learn::ModelRegistry::with_defaults();
        // A --schedule file overrides the [schedule]/[labels] sections of --config.
        auto schedule_tree = [&](const std::string& fallback) {
            return config_from(common.schedule.empty() ? fallback : common.schedule);
        };

        if (*simulate) {
            auto cfg = load_simulator_config(config_from(sim_config));
            auto days = simulation_days(cfg, sim_start, sim_mornings, sim_days);
            auto raw = simulate_days(cfg, days, common.seed);
            emit(sim_out, [&](std::ostream& os) { write_raw_csv(os, raw); });
            std::set<std::uint64_t> sweeps;
            for (const auto& r : raw) sweeps.insert(r.sample_id);
            std::cerr << "days " << days.size() << "  sweeps with records " << sweeps.size() << "  records " << raw.size()
                      << "\n";
            return kOk;
        }

        if (*validate) {
            auto recs = read_logs(val_in, common.strict, common.seed);
            auto rep = validate_records(recs);
            std::cout << rep.render();
            return rep.violations.empty() ? kOk : kData;
        }

        if (*featurize_cmd) {
            auto recs = read_logs(feat_in, common.strict, common.seed);
            ApRoster roster;
            auto fm = featurize(recs, roster);
            emit(feat_out, [&](std::ostream& os) { write_feature_csv(os, fm); });
            if (!feat_roster.empty()) {
                auto out = open_out(feat_roster);
                write_roster(out, roster);
            }
            std::cerr << "records " << recs.size() << "  APs " << roster.size() << "  minutes " << fm.rows() << "\n";
            return kOk;
        }

        if (*label) {
            auto tree = schedule_tree("");
            auto schedule = load_schedule(tree);
            auto specs = task_specs({lab_task}, tree);
            auto in = open_in(lab_in);
            auto fm = read_feature_csv(in);
            auto data = label_dataset(fm, schedule, specs.front());
            emit(lab_out, [&](std::ostream& os) { write_labeled_csv(os, data); });
            std::cerr << "rows " << data.size() << "  positive " << data.count(Label::Positive) << "  negative "
                      << data.count(Label::Negative) << "\n";
            return kOk;
        }

        if (*train) {
            auto in = open_in(tr_in);
            auto data = read_labeled_csv(in);
            if (!tr_no_balance) data = learn::balance_subsample(data, derive_seed(common.seed, kSeedBalance));
            auto model = registry.get(tr_model)(data, common.seed);
            emit(tr_out, [&](std::ostream& os) { os << learn::model_to_json(model).dump() << '\n'; });
            return kOk;
        }

        if (*evaluate) {
            auto tree = schedule_tree("");
            PipelineOptions opt;
            opt.schedule = load_schedule(tree);
            opt.models = split_models(ev_models, registry);
            opt.folds = ev_folds;
            opt.seed = common.seed;
            opt.pca_components = ev_pca;
            auto in = open_in(ev_in);
            auto fm = read_feature_csv(in);
            std::vector<learn::EvalEntry> entries;
            for (const auto& spec : task_specs(ev_tasks.empty() ? std::vector<std::string>{"break", "endofclass"} : ev_tasks, tree)) {
                opt.spec = spec;
                auto res = evaluate_task(fm, opt, registry);
                for (const auto& d : res.diagnostics) std::cerr << "note: " << task_name(spec.task) << ": " << d << "\n";
                entries.insert(entries.end(), res.entries.begin(), res.entries.end());
            }
            emit(ev_out, [&](std::ostream& os) { learn::write_report_tsv(os, entries); });
            print_summary(ev_out.empty() ? std::cerr : std::cout, entries);
            return kOk;
        }

        if (*run) {
            auto cfg_tree = config_from(run_config);
            auto cfg = load_simulator_config(cfg_tree);
            auto tree = common.schedule.empty() ? cfg_tree : config_from(common.schedule);
            PipelineOptions opt;
            opt.schedule = common.schedule.empty() ? cfg.schedule : load_schedule(tree);
            opt.models = split_models(run_models, registry);
            opt.folds = run_folds;
            opt.seed = common.seed;
            opt.pca_components = run_pca;
            std::vector<RawRecord> raw;
            if (!run_logs.empty()) {
                raw = read_raw_logs(run_logs, common.strict);
            } else {
                raw = simulate_days(cfg, simulation_days(cfg, run_start, run_mornings, 0), common.seed);
            }
            auto specs = task_specs(run_tasks.empty() ? std::vector<std::string>{"break", "endofclass"} : run_tasks, tree);
            auto res = run_pipeline(raw, opt, specs, registry);
            for (const auto& d : res.diagnostics) std::cerr << "note: " << d << "\n";
            emit(run_out, [&](std::ostream& os) { learn::write_report_tsv(os, res.entries); });
            auto& summary = run_out.empty() ? std::cerr : std::cout;
            summary << "records " << res.records << "  APs " << res.roster.size() << "  minutes " << res.minutes << "\n";
            print_summary(summary, res.entries);
            return kOk;
        }

        if (*report) {
            if (rep_in.empty()) throw UsageError("report needs at least one TSV file");
            std::vector<std::string> contents;
            for (const auto& p : rep_in) {
                auto in = open_in(p);
                std::ostringstream ss;
                ss << in.rdbuf();
                contents.push_back(ss.str());
            }
            std::cout << merge_reports(contents).render();
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const DegenerateModelError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}
