#pragma once

// Declarative what-if edits applied to a process model: task removal,
// duration scaling and replacement, and rework-probability changes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "schedrisk/expected.hpp"
#include "schedrisk/model.hpp"

namespace schedrisk {

struct RemoveTasks {
    std::vector<std::string> ids;  // any step id: task, nested task, parallel or decision
    std::string provenance;

    friend bool operator==(const RemoveTasks&, const RemoveTasks&) = default;
};

struct IdSelector {
    std::vector<std::string> ids;
    friend bool operator==(const IdSelector&, const IdSelector&) = default;
};

struct CategorySelector {
    TaskCategory category = TaskCategory::ReviewMeetings;
    friend bool operator==(const CategorySelector&, const CategorySelector&) = default;
};

using TaskSelector = std::variant<IdSelector, CategorySelector>;

struct ScaleDuration {
    TaskSelector selector;
    double factor = 1.0;
    std::string provenance;

    friend bool operator==(const ScaleDuration&, const ScaleDuration&) = default;
};

struct ReplaceDuration {
    std::string id;
    DurationDistribution duration;
    std::string provenance;

    friend bool operator==(const ReplaceDuration&, const ReplaceDuration&) = default;
};

struct SetProbability {
    std::string id;
    double value = 0.0;
    std::string provenance;

    friend bool operator==(const SetProbability&, const SetProbability&) = default;
};

using TransformOp = std::variant<RemoveTasks, ScaleDuration, ReplaceDuration, SetProbability>;

inline constexpr std::string_view op_name(const TransformOp& op) {
    switch (op.index()) {
        case 0: return "remove_tasks";
        case 1: return "scale_duration";
        case 2: return "replace_duration";
        default: return "set_probability";
    }
}

struct Scenario {
    std::string name;
    std::string description;
    std::vector<TransformOp> ops;  // applied strictly in order

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

enum class TransformErrorCode : std::uint8_t {
    UnknownId,
    DanglingTarget,
    NotADecision,
    NotATask,
    InvalidOp,
    InvalidModel,
    InvalidResult,
};

inline constexpr std::string_view transform_error_code(TransformErrorCode c) {
    switch (c) {
        case TransformErrorCode::UnknownId: return "UNKNOWN_ID";
        case TransformErrorCode::DanglingTarget: return "DANGLING_TARGET";
        case TransformErrorCode::NotADecision: return "NOT_A_DECISION";
        case TransformErrorCode::NotATask: return "NOT_A_TASK";
        case TransformErrorCode::InvalidOp: return "INVALID_OP";
        case TransformErrorCode::InvalidModel: return "INVALID_MODEL";
        case TransformErrorCode::InvalidResult: return "INVALID_RESULT";
    }
    return "UNKNOWN";
}

struct TransformError {
    TransformErrorCode code = TransformErrorCode::UnknownId;
    std::size_t op_index = 0;  // position of the failing op in the scenario
    std::string id;            // offending id, when there is one
    std::string message;

    friend bool operator==(const TransformError&, const TransformError&) = default;
};

namespace detail {

enum class Found : std::uint8_t { None, Task, NestedTask, Parallel, Decision };

inline Found find_step(const ProcessModel& model, std::string_view id) {
    for (const Step& step : model.steps) {
        if (step_id(step) == id) {
            switch (step.index()) {
                case 0: return Found::Task;
                case 1: return Found::Parallel;
                default: return Found::Decision;
            }
        }
        if (const auto* p = std::get_if<Parallel>(&step)) {
            for (const auto& branch : p->branches) {
                for (const Task& t : branch) {
                    if (t.id == id) return Found::NestedTask;
                }
            }
        }
    }
    return Found::None;
}

inline Task* find_task(ProcessModel& model, std::string_view id) {
    Task* hit = nullptr;
    for_each_task(model, [&](Task& t) {
        if (hit == nullptr && t.id == id) hit = &t;
    });
    return hit;
}

class Applier {
public:
    Applier(ProcessModel& model, std::size_t index) : model_(model), index_(index) {}

    std::optional<TransformError> operator()(const RemoveTasks& op) {
        if (op.ids.empty()) return error(TransformErrorCode::InvalidOp, "", "remove_tasks needs at least one id");
        for (const auto& id : op.ids) {
            if (find_step(model_, id) == Found::None) {
                return error(TransformErrorCode::UnknownId, id, "no step with id '" + id + "'");
            }
        }
        const std::unordered_set<std::string_view> doomed(op.ids.begin(), op.ids.end());
        std::vector<Step> kept;
        kept.reserve(model_.steps.size());
        for (Step& step : model_.steps) {
            if (doomed.contains(step_id(step))) continue;
            if (auto* p = std::get_if<Parallel>(&step)) {
                for (auto& branch : p->branches) {
                    std::erase_if(branch, [&](const Task& t) { return doomed.contains(t.id); });
                }
            }
            kept.push_back(std::move(step));
        }
        model_.steps = std::move(kept);

        std::unordered_set<std::string_view> remaining;
        for (const Step& step : model_.steps) remaining.insert(step_id(step));
        for (const Step& step : model_.steps) {
            if (const auto* d = std::get_if<Decision>(&step); d && !remaining.contains(d->target)) {
                return error(TransformErrorCode::DanglingTarget, d->id,
                             "decision '" + d->id + "' targets removed step '" + d->target + "'");
            }
        }
        return std::nullopt;
    }

    std::optional<TransformError> operator()(const ScaleDuration& op) {
        if (!std::isfinite(op.factor) || op.factor <= 0.0) {
            return error(TransformErrorCode::InvalidOp, "", "scale factor must be positive and finite");
        }
        if (const auto* sel = std::get_if<IdSelector>(&op.selector)) {
            if (sel->ids.empty()) return error(TransformErrorCode::InvalidOp, "", "selector needs at least one id");
            for (const auto& id : sel->ids) {
                if (auto e = require_task(id)) return e;
            }
            const std::unordered_set<std::string_view> unique(sel->ids.begin(), sel->ids.end());
            for (std::string_view id : unique) {
                Task* t = find_task(model_, id);
                t->duration = scaled(t->duration, op.factor);
            }
        } else {
            const TaskCategory cat = std::get<CategorySelector>(op.selector).category;
            for_each_task(model_, [&](Task& t) {
                if (t.category == cat) t.duration = scaled(t.duration, op.factor);
            });
        }
        return std::nullopt;
    }

    std::optional<TransformError> operator()(const ReplaceDuration& op) {
        if (auto e = require_task(op.id)) return e;
        std::vector<Diagnostic> diags;
        detail::check_duration(Task{op.id, "", "", {}, op.duration, ""}, diags);
        if (!diags.empty()) return error(TransformErrorCode::InvalidOp, op.id, "replacement duration: " + diags.front().message);
        find_task(model_, op.id)->duration = op.duration;
        return std::nullopt;
    }

    std::optional<TransformError> operator()(const SetProbability& op) {
        if (!std::isfinite(op.value) || op.value < 0.0 || op.value >= 1.0) {
            return error(TransformErrorCode::InvalidOp, op.id, "probability must lie in [0, 1)");
        }
        for (Step& step : model_.steps) {
            if (step_id(step) != op.id) continue;
            auto* d = std::get_if<Decision>(&step);
            if (d == nullptr) {
                return error(TransformErrorCode::NotADecision, op.id, "step '" + op.id + "' is not a decision");
            }
            d->probability = op.value;
            return std::nullopt;
        }
        if (find_step(model_, op.id) != Found::None) {
            return error(TransformErrorCode::NotADecision, op.id, "step '" + op.id + "' is not a decision");
        }
        return error(TransformErrorCode::UnknownId, op.id, "no step with id '" + op.id + "'");
    }

private:
    ProcessModel& model_;
    std::size_t index_;

    TransformError error(TransformErrorCode code, std::string id, std::string msg) const {
        return TransformError{code, index_, std::move(id), std::move(msg)};
    }

    std::optional<TransformError> require_task(const std::string& id) const {
        switch (find_step(model_, id)) {
            case Found::None:
                return error(TransformErrorCode::UnknownId, id, "no step with id '" + id + "'");
            case Found::Task:
            case Found::NestedTask:
                return std::nullopt;
            default:
                return error(TransformErrorCode::NotATask, id, "step '" + id + "' is not a task");
        }
    }
};

}  // namespace detail

/// Applies one op to a copy of `model`.
inline Expected<ProcessModel, TransformError> apply_op(const ProcessModel& model, const TransformOp& op,
                                                       std::size_t op_index = 0) {
    ProcessModel out = model;
    if (auto err = std::visit(detail::Applier(out, op_index), op)) return *err;
    return out;
}

/// Applies every op in order to a copy of `model`. The input must be valid;
/// the output is re-validated and is guaranteed valid on success.
///
/// Referential integrity is checked after each op: removing the target of a
/// decision fails with DANGLING_TARGET unless that decision was removed by
/// the same op or an earlier one.
inline Expected<ProcessModel, TransformError> apply_scenario(const ProcessModel& model, const Scenario& scenario) {
    if (auto diags = validate_model(model); !diags.empty()) {
        return TransformError{TransformErrorCode::InvalidModel, 0, diags.front().step_id,
                              "input model is invalid: " + diags.front().message};
    }
    ProcessModel out = model;
    for (std::size_t i = 0; i < scenario.ops.size(); ++i) {
        if (auto err = std::visit(detail::Applier(out, i), scenario.ops[i])) return *err;
    }
    if (auto diags = validate_model(out); !diags.empty()) {
        const auto& d = diags.front();
        return TransformError{TransformErrorCode::InvalidResult, scenario.ops.empty() ? 0 : scenario.ops.size() - 1,
                              d.step_id,
                              "transformed model is invalid: " + std::string(rule_code(d.rule)) + " " + d.message};
    }
    return out;
}

}  // namespace schedrisk
