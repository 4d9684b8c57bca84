#pragma once

// Process-model domain types: duration distributions, task categories,
// steps (tasks, parallel blocks, backward-jump decisions) and the model
// itself, plus semantic validation and closed-form triangular moments.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace schedrisk {

// ---------------------------------------------------------------------------
// Durations (days)
// ---------------------------------------------------------------------------

struct Triangular {
    double min = 0.0;
    double mode = 0.0;
    double max = 0.0;

    friend bool operator==(const Triangular&, const Triangular&) = default;
};

struct Deterministic {
    double value = 0.0;

    friend bool operator==(const Deterministic&, const Deterministic&) = default;
};

using DurationDistribution = std::variant<Triangular, Deterministic>;

inline DurationDistribution triangular(double min, double mode, double max) {
    return Triangular{min, mode, max};
}

inline DurationDistribution deterministic(double value) { return Deterministic{value}; }

/// Smallest and largest value the distribution can produce.
inline std::pair<double, double> support(const DurationDistribution& dist) {
    if (const auto* t = std::get_if<Triangular>(&dist)) return {t->min, t->max};
    const double v = std::get<Deterministic>(dist).value;
    return {v, v};
}

/// Returns the distribution with every parameter multiplied by `factor`.
inline DurationDistribution scaled(const DurationDistribution& dist, double factor) {
    if (const auto* t = std::get_if<Triangular>(&dist)) {
        return Triangular{t->min * factor, t->mode * factor, t->max * factor};
    }
    return Deterministic{std::get<Deterministic>(dist).value * factor};
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Closed-form mean and variance. Triangular: mean (a+m+b)/3,
/// variance (a²+m²+b²−am−ab−mb)/18. Deterministic{v}: (v, 0).
inline Moments triangular_moments(const DurationDistribution& dist) {
    if (const auto* t = std::get_if<Triangular>(&dist)) {
        const double a = t->min;
        const double m = t->mode;
        const double b = t->max;
        const double mean = (a + m + b) / 3.0;
        double variance = (a * a + m * m + b * b - a * m - a * b - m * b) / 18.0;
        if (variance < 0.0) variance = 0.0;  // cancellation on near-degenerate triples
        return {mean, variance};
    }
    return {std::get<Deterministic>(dist).value, 0.0};
}

// ---------------------------------------------------------------------------
// Task categories
// ---------------------------------------------------------------------------

enum class TaskCategory : std::uint8_t {
    ElicitingRequirements = 0,
    InformationExchange = 1,
    SystemLevelModeling = 2,
    DisciplinaryModeling = 3,
    ReviewMeetings = 4,
};

inline constexpr std::size_t kCategoryCount = 5;

inline constexpr std::array<TaskCategory, kCategoryCount> kAllCategories = {
    TaskCategory::ElicitingRequirements, TaskCategory::InformationExchange,
    TaskCategory::SystemLevelModeling,   TaskCategory::DisciplinaryModeling,
    TaskCategory::ReviewMeetings,
};

/// Document / CSV spelling of a category.
inline constexpr std::string_view category_name(TaskCategory c) {
    switch (c) {
        case TaskCategory::ElicitingRequirements: return "eliciting_requirements";
        case TaskCategory::InformationExchange: return "information_exchange";
        case TaskCategory::SystemLevelModeling: return "system_modeling";
        case TaskCategory::DisciplinaryModeling: return "disciplinary_modeling";
        case TaskCategory::ReviewMeetings: return "review_meetings";
    }
    return "unknown";
}

inline std::optional<TaskCategory> category_from_name(std::string_view name) {
    for (TaskCategory c : kAllCategories) {
        if (category_name(c) == name) return c;
    }
    return std::nullopt;
}

inline constexpr std::size_t category_index(TaskCategory c) { return static_cast<std::size_t>(c); }

// ---------------------------------------------------------------------------
// Steps and model
// ---------------------------------------------------------------------------

struct Task {
    std::string id;
    std::string label;
    std::string stakeholder;
    TaskCategory category = TaskCategory::InformationExchange;
    DurationDistribution duration = Deterministic{0.0};
    std::string provenance;  // optional free-form tag, e.g. "calibrated"

    friend bool operator==(const Task&, const Task&) = default;
};

/// Fan-out/fan-in block. Each branch is a sequence of tasks; the block lasts
/// as long as its slowest branch.
struct Parallel {
    std::string id;
    std::vector<std::vector<Task>> branches;

    friend bool operator==(const Parallel&, const Parallel&) = default;
};

/// Rework loop: with `probability`, control jumps back to the earlier
/// top-level step `target` and re-executes from there.
struct Decision {
    std::string id;
    std::string label;
    double probability = 0.0;
    std::string target;
    std::string provenance;

    friend bool operator==(const Decision&, const Decision&) = default;
};

using Step = std::variant<Task, Parallel, Decision>;

inline const std::string& step_id(const Step& step) {
    return std::visit([](const auto& s) -> const std::string& { return s.id; }, step);
}

struct ProcessModel {
    std::string name;
    std::string description;
    std::vector<std::string> stakeholders;
    std::vector<Step> steps;

    friend bool operator==(const ProcessModel&, const ProcessModel&) = default;
};

/// Calls `fn(const Task&)` for every task, top-level and nested, in document order.
template <class Fn>
void for_each_task(const ProcessModel& model, Fn&& fn) {
    for (const Step& step : model.steps) {
        if (const auto* t = std::get_if<Task>(&step)) {
            fn(*t);
        } else if (const auto* p = std::get_if<Parallel>(&step)) {
            for (const auto& branch : p->branches) {
                for (const Task& task : branch) fn(task);
            }
        }
    }
}

template <class Fn>
void for_each_task(ProcessModel& model, Fn&& fn) {
    for (Step& step : model.steps) {
        if (auto* t = std::get_if<Task>(&step)) {
            fn(*t);
        } else if (auto* p = std::get_if<Parallel>(&step)) {
            for (auto& branch : p->branches) {
                for (Task& task : branch) fn(task);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class Rule : std::uint8_t {
    TriangularOrder,
    NegativeDuration,
    NonFinite,
    ProbabilityRange,
    ForwardJump,
    UnknownTarget,
    NestedTarget,
    DuplicateId,
    EmptyId,
    UnknownStakeholder,
    EmptyModel,
    NoTasks,
};

inline constexpr std::string_view rule_code(Rule r) {
    switch (r) {
        case Rule::TriangularOrder: return "TRI_ORDER";
        case Rule::NegativeDuration: return "NEGATIVE_DURATION";
        case Rule::NonFinite: return "NON_FINITE";
        case Rule::ProbabilityRange: return "PROB_RANGE";
        case Rule::ForwardJump: return "FORWARD_JUMP";
        case Rule::UnknownTarget: return "UNKNOWN_TARGET";
        case Rule::NestedTarget: return "NESTED_TARGET";
        case Rule::DuplicateId: return "DUPLICATE_ID";
        case Rule::EmptyId: return "EMPTY_ID";
        case Rule::UnknownStakeholder: return "UNKNOWN_STAKEHOLDER";
        case Rule::EmptyModel: return "EMPTY_MODEL";
        case Rule::NoTasks: return "NO_TASKS";
    }
    return "UNKNOWN";
}

struct Diagnostic {
    std::string step_id;  // empty for model-level findings
    Rule rule = Rule::EmptyModel;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

namespace detail {

inline void check_duration(const Task& task, std::vector<Diagnostic>& out) {
    auto report = [&](Rule rule, std::string msg) {
        out.push_back(Diagnostic{task.id, rule, std::move(msg)});
    };
    if (const auto* t = std::get_if<Triangular>(&task.duration)) {
        if (!std::isfinite(t->min) || !std::isfinite(t->mode) || !std::isfinite(t->max)) {
            report(Rule::NonFinite, "triangular parameters must be finite");
            return;
        }
        if (t->min < 0.0) report(Rule::NegativeDuration, "triangular min is negative");
        if (t->min > t->mode) report(Rule::TriangularOrder, "min exceeds mode");
        if (t->mode > t->max) report(Rule::TriangularOrder, "mode exceeds max");
    } else {
        const double v = std::get<Deterministic>(task.duration).value;
        if (!std::isfinite(v)) {
            report(Rule::NonFinite, "deterministic value must be finite");
        } else if (v < 0.0) {
            report(Rule::NegativeDuration, "deterministic value is negative");
        }
    }
}

}  // namespace detail

/// Checks every structural and numeric rule of a model and returns one
/// diagnostic per violation (empty when the model is valid). Never mutates.
inline std::vector<Diagnostic> validate_model(const ProcessModel& model) {
    std::vector<Diagnostic> out;

    if (model.steps.empty()) {
        out.push_back({"", Rule::EmptyModel, "model has no steps"});
        return out;
    }

    std::unordered_set<std::string_view> stakeholders(model.stakeholders.begin(),
                                                      model.stakeholders.end());
    std::unordered_map<std::string_view, std::size_t> top_level;  // id -> index
    std::unordered_set<std::string_view> nested;
    std::unordered_set<std::string_view> seen;
    std::size_t task_count = 0;

    auto check_id = [&](const std::string& id) {
        if (id.empty()) {
            out.push_back({id, Rule::EmptyId, "step id is empty"});
            return;
        }
        if (!seen.insert(id).second) {
            out.push_back({id, Rule::DuplicateId, "duplicate step id '" + id + "'"});
        }
    };
    auto check_task = [&](const Task& task) {
        ++task_count;
        check_id(task.id);
        if (!stakeholders.contains(task.stakeholder)) {
            out.push_back({task.id, Rule::UnknownStakeholder,
                           "stakeholder '" + task.stakeholder + "' is not declared"});
        }
        detail::check_duration(task, out);
    };

    for (std::size_t i = 0; i < model.steps.size(); ++i) {
        const Step& step = model.steps[i];
        top_level.emplace(step_id(step), i);
        if (const auto* t = std::get_if<Task>(&step)) {
            check_task(*t);
        } else if (const auto* p = std::get_if<Parallel>(&step)) {
            check_id(p->id);
            for (const auto& branch : p->branches) {
                for (const Task& task : branch) {
                    nested.insert(task.id);
                    check_task(task);
                }
            }
        } else {
            const auto& d = std::get<Decision>(step);
            check_id(d.id);
            if (!std::isfinite(d.probability)) {
                out.push_back({d.id, Rule::NonFinite, "probability must be finite"});
            } else if (d.probability < 0.0 || d.probability >= 1.0) {
                out.push_back({d.id, Rule::ProbabilityRange, "probability must lie in [0, 1)"});
            }
        }
    }

    // Targets are resolved against the whole model so that forward references
    // are reported as FORWARD_JUMP rather than UNKNOWN_TARGET.
    for (std::size_t i = 0; i < model.steps.size(); ++i) {
        const auto* d = std::get_if<Decision>(&model.steps[i]);
        if (d == nullptr) continue;
        auto it = top_level.find(d->target);
        if (it == top_level.end()) {
            if (nested.contains(d->target)) {
                out.push_back({d->id, Rule::NestedTarget,
                               "target '" + d->target + "' is inside a parallel block"});
            } else {
                out.push_back({d->id, Rule::UnknownTarget,
                               "target '" + d->target + "' does not exist"});
            }
        } else if (it->second >= i) {
            out.push_back({d->id, Rule::ForwardJump,
                           "target '" + d->target + "' does not precede the decision"});
        }
    }

    if (task_count == 0) out.push_back({"", Rule::NoTasks, "model contains no tasks"});
    return out;
}

inline bool is_valid(const ProcessModel& model) { return validate_model(model).empty(); }

}  // namespace schedrisk
