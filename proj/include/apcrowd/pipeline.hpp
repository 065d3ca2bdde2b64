#pragma once

// End-to-end composition: anonymize -> count -> aggregate -> label -> balance -> cross-validate,
// plus merging of per-task reports into one comparison table.

#include <apcrowd/dataset.hpp>
#include <apcrowd/features.hpp>
#include <apcrowd/labeling.hpp>
#include <apcrowd/learn/evaluate.hpp>
#include <apcrowd/logmodel.hpp>
#include <apcrowd/pca.hpp>
#include <apcrowd/rng.hpp>

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace apcrowd {

// Sub-seed slots drawn from the single master seed.
enum SeedSlot : std::uint64_t { kSeedAnonymize = 1, kSeedBalance = 2, kSeedCrossValidate = 3 };

struct PipelineOptions {
    ScheduleConfig schedule;
    TaskSpec spec;
    std::vector<std::string> models{"fine_tree", "bagged"};
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    std::optional<std::size_t> pca_components;
};

struct TaskResult {
    LabeledDataset labeled;
    LabeledDataset balanced;
    std::vector<learn::EvalEntry> entries;
    std::vector<std::string> diagnostics;  // models skipped, with reason
};

inline std::vector<ConnectionRecord> anonymize(const std::vector<RawRecord>& raw, std::uint64_t seed) {
    SessionHasher hasher(derive_seed(seed, kSeedAnonymize));
    return anonymize_stream(raw, hasher);
}

namespace detail {

inline std::string date_range(const FeatureMatrix& fm) {
    if (fm.rows() == 0) return "(no data)";
    auto [lo, hi] = std::minmax_element(fm.minute_starts.begin(), fm.minute_starts.end());
    return format_date(date_of(*lo)) + " .. " + format_date(date_of(*hi));
}

}  // namespace detail

// Labels, balances and cross-validates each requested model on one task.
inline TaskResult evaluate_task(const FeatureMatrix& fm, const PipelineOptions& opt,
                                const learn::ModelRegistry& registry = learn::ModelRegistry::with_defaults()) {
    TaskResult res;
    res.labeled = label_dataset(fm, opt.schedule, opt.spec);
    const auto task = task_name(opt.spec.task);
    if (res.labeled.size() == 0) throw DataError("no in-scope minutes in the data (" + detail::date_range(fm) + ")");
    if (res.labeled.count(Label::Positive) == 0 || res.labeled.count(Label::Negative) == 0)
        throw DataError("task " + task + ": all labels are " +
                        (res.labeled.count(Label::Positive) ? "positive" : "negative") + " over " + detail::date_range(fm));
    if (opt.pca_components) {
        auto pca = pca_fit_transform(res.labeled.features, *opt.pca_components);
        res.labeled.features = std::move(pca.transformed);
    }
    res.balanced = learn::balance_subsample(res.labeled, derive_seed(opt.seed, kSeedBalance));
    for (const auto& name : opt.models) {
        const auto& trainer = registry.get(name);
        try {
            auto e = learn::cross_validate(res.balanced, name, trainer, opt.folds, derive_seed(opt.seed, kSeedCrossValidate));
            e.task = task;
            res.entries.push_back(std::move(e));
        } catch (const DegenerateModelError& err) {
            res.diagnostics.push_back(name + ": skipped (" + err.what() + ")");
        }
    }
    return res;
}

// The whole chain on raw logs: anonymize, count, aggregate, then label and evaluate per task.
struct RunResult {
    std::size_t records = 0;
    ApRoster roster;
    std::size_t minutes = 0;
    std::vector<learn::EvalEntry> entries;  // task order, then model order
    std::vector<std::string> diagnostics;
};

inline RunResult run_pipeline(const std::vector<RawRecord>& raw, const PipelineOptions& opt, const std::vector<TaskSpec>& tasks,
                              const learn::ModelRegistry& registry = learn::ModelRegistry::with_defaults()) {
    RunResult out;
    out.records = raw.size();
    auto fm = featurize(anonymize(raw, opt.seed), out.roster);
    out.minutes = fm.rows();
    for (const auto& spec : tasks) {
        auto task_opt = opt;
        task_opt.spec = spec;
        auto res = evaluate_task(fm, task_opt, registry);
        out.entries.insert(out.entries.end(), res.entries.begin(), res.entries.end());
        for (auto& d : res.diagnostics) out.diagnostics.push_back(task_name(spec.task) + ": " + d);
    }
    return out;
}

inline const learn::EvalEntry* top_entry(const std::vector<learn::EvalEntry>& entries) {
    const learn::EvalEntry* best = nullptr;
    for (const auto& e : entries)
        if (!best || e.accuracy > best->accuracy) best = &e;
    return best;
}

struct ReportRow {
    std::string model;
    std::map<std::string, double> accuracy;  // by task
};

struct MergedReport {
    std::vector<std::string> tasks;  // column order
    std::vector<ReportRow> rows;     // sorted by the first task's accuracy, descending

    std::string render() const;
};

// Merges report TSVs. The same (model, task) may appear more than once only with the
// same accuracy.
inline MergedReport merge_reports(const std::vector<std::string>& tsv_contents) {
    MergedReport rep;
    std::map<std::string, ReportRow> rows;
    std::vector<std::string> seen_tasks;
    for (const auto& content : tsv_contents) {
        std::istringstream in(content);
        std::string line;
        std::size_t lineno = 0;
        if (!std::getline(in, line) || detail::chomp(line) != learn::kReportHeader)
            throw ParseError(1, "report header must be '" + std::string(learn::kReportHeader) + "'");
        ++lineno;
        while (std::getline(in, line)) {
            ++lineno;
            auto body = detail::chomp(line);
            if (body.empty()) continue;
            std::vector<std::string> cols;
            std::stringstream ss{std::string(body)};
            for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
            if (cols.size() != 8) throw ParseError(lineno, "report row must have 8 columns");
            const auto& model = cols[0];
            const auto& task = cols[1];
            double acc = detail::parse_double(cols[2], lineno);
            auto& row = rows[model];
            row.model = model;
            auto [it, inserted] = row.accuracy.emplace(task, acc);
            if (!inserted && it->second != acc)
                throw DataError("conflicting duplicate rows for model '" + model + "' on task '" + task + "'");
            if (std::find(seen_tasks.begin(), seen_tasks.end(), task) == seen_tasks.end()) seen_tasks.push_back(task);
        }
    }
    for (const char* known : {"break", "endofclass"})
        if (std::find(seen_tasks.begin(), seen_tasks.end(), known) != seen_tasks.end()) rep.tasks.push_back(known);
    for (const auto& t : seen_tasks)
        if (std::find(rep.tasks.begin(), rep.tasks.end(), t) == rep.tasks.end()) rep.tasks.push_back(t);
    for (auto& [_, row] : rows) rep.rows.push_back(std::move(row));
    if (!rep.tasks.empty()) {
        const auto& first = rep.tasks.front();
        std::stable_sort(rep.rows.begin(), rep.rows.end(), [&](const ReportRow& a, const ReportRow& b) {
            auto av = a.accuracy.contains(first) ? a.accuracy.at(first) : -1.0;
            auto bv = b.accuracy.contains(first) ? b.accuracy.at(first) : -1.0;
            return av > bv;
        });
    }
    return rep;
}

// Accuracies as percentages; the best cell of each column is marked with '*'.
inline std::string MergedReport::render() const {
    std::map<std::string, double> best;
    for (const auto& t : tasks)
        for (const auto& r : rows)
            if (r.accuracy.contains(t) && (!best.contains(t) || r.accuracy.at(t) > best[t])) best[t] = r.accuracy.at(t);
    std::size_t name_w = 5;
    for (const auto& r : rows) name_w = std::max(name_w, r.model.size());
    std::ostringstream os;
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    os << pad("model", name_w);
    for (const auto& t : tasks) os << "  " << pad(t, 12);
    os << '\n';
    for (const auto& r : rows) {
        os << pad(r.model, name_w);
        for (const auto& t : tasks) {
            std::string cell = "-";
            if (r.accuracy.contains(t)) {
                cell = learn::format_fixed(100.0 * r.accuracy.at(t), 1);
                if (r.accuracy.at(t) == best.at(t)) cell += " *";
            }
            os << "  " << pad(cell, 12);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace apcrowd
