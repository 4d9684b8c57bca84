#pragma once

// Reading and writing of process-model and scenario documents (JSON syntax).
//
// Parsing is strict: unknown keys are rejected, and every error carries the
// line and column of the offending key or value. The first syntax error
// aborts; schema errors are collected so one pass reports all of them.
// Semantic rules (triangular ordering, probability range, jump direction)
// belong to validate_model, not to the parser.
//
// Serialization is canonical: keys in schema order, one step per line,
// numbers with at most 6 decimals and trailing zeros trimmed, LF endings.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "schedrisk/expected.hpp"
#include "schedrisk/json_reader.hpp"
#include "schedrisk/model.hpp"
#include "schedrisk/scenario.hpp"

namespace schedrisk {

enum class ParseErrorCode : std::uint8_t { Syntax, UnknownKey, MissingKey, TypeMismatch, DuplicateId };

inline constexpr std::string_view parse_error_code(ParseErrorCode c) {
    switch (c) {
        case ParseErrorCode::Syntax: return "SYNTAX";
        case ParseErrorCode::UnknownKey: return "UNKNOWN_KEY";
        case ParseErrorCode::MissingKey: return "MISSING_KEY";
        case ParseErrorCode::TypeMismatch: return "TYPE_MISMATCH";
        case ParseErrorCode::DuplicateId: return "DUPLICATE_ID";
    }
    return "UNKNOWN";
}

struct ParseError {
    std::string source;
    std::size_t line = 0;
    std::size_t column = 0;
    ParseErrorCode code = ParseErrorCode::Syntax;
    std::string message;

    /// `source:line:column: message`
    [[nodiscard]] std::string to_string() const {
        return source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    }
};

using ParseErrors = std::vector<ParseError>;

template <class T>
using ParseResult = Expected<T, ParseErrors>;

namespace detail {

/// Walks a positioned DOM against a fixed schema, collecting shape errors.
class SchemaReader {
public:
    explicit SchemaReader(std::string source) : source_(std::move(source)) {}

    ParseErrors errors;

    void error(json::Position pos, ParseErrorCode code, std::string msg) {
        errors.push_back(ParseError{source_, pos.line, pos.column, code, std::move(msg)});
    }

    /// Checks the object's keys against `allowed`, reporting unknown and
    /// duplicated keys. Returns false if `v` is not an object.
    bool object(const json::Value& v, std::string_view what, std::span<const std::string_view> allowed) {
        if (!v.is(json::Kind::Object)) {
            type_error(v, what, "object");
            return false;
        }
        std::unordered_set<std::string_view> seen;
        for (const auto& m : v.members) {
            bool known = false;
            for (auto k : allowed) known = known || (k == m.key);
            if (!known) {
                error(m.key_pos, ParseErrorCode::UnknownKey, "unknown key \"" + m.key + "\" in " + std::string(what));
            } else if (!seen.insert(m.key).second) {
                error(m.key_pos, ParseErrorCode::DuplicateId, "duplicate key \"" + m.key + "\" in " + std::string(what));
            }
        }
        return true;
    }

    const json::Value* find(const json::Value& obj, std::string_view key) {
        for (const auto& m : obj.members) {
            if (m.key == key) return &m.value;
        }
        return nullptr;
    }

    const json::Value* require(const json::Value& obj, std::string_view key, std::string_view what) {
        const json::Value* v = find(obj, key);
        if (v == nullptr) {
            error(obj.pos, ParseErrorCode::MissingKey,
                  "missing key \"" + std::string(key) + "\" in " + std::string(what));
        }
        return v;
    }

    void type_error(const json::Value& v, std::string_view what, std::string_view expected) {
        error(v.pos, ParseErrorCode::TypeMismatch,
              std::string(what) + ": expected " + std::string(expected) + ", found " + std::string(json::kind_name(v.kind)));
    }

    std::optional<std::string> string(const json::Value& obj, std::string_view key, std::string_view what,
                                      bool required = true) {
        const json::Value* v = required ? require(obj, key, what) : find(obj, key);
        if (v == nullptr) return std::nullopt;
        if (!v->is(json::Kind::String)) {
            type_error(*v, std::string(what) + " \"" + std::string(key) + "\"", "string");
            return std::nullopt;
        }
        return v->string;
    }

    std::optional<double> number(const json::Value& obj, std::string_view key, std::string_view what) {
        const json::Value* v = require(obj, key, what);
        if (v == nullptr) return std::nullopt;
        if (!v->is(json::Kind::Number)) {
            type_error(*v, std::string(what) + " \"" + std::string(key) + "\"", "number");
            return std::nullopt;
        }
        return v->number;
    }

    std::optional<std::vector<std::string>> string_list(const json::Value& obj, std::string_view key,
                                                        std::string_view what) {
        const json::Value* v = require(obj, key, what);
        if (v == nullptr) return std::nullopt;
        if (!v->is(json::Kind::Array)) {
            type_error(*v, std::string(what) + " \"" + std::string(key) + "\"", "array of strings");
            return std::nullopt;
        }
        std::vector<std::string> out;
        bool ok = true;
        for (const auto& item : v->items) {
            if (!item.is(json::Kind::String)) {
                type_error(item, std::string(what) + " \"" + std::string(key) + "\" element", "string");
                ok = false;
                continue;
            }
            out.push_back(item.string);
        }
        if (!ok) return std::nullopt;
        return out;
    }

    std::optional<TaskCategory> category(const json::Value& obj, std::string_view what) {
        const json::Value* v = require(obj, "category", what);
        if (v == nullptr) return std::nullopt;
        if (!v->is(json::Kind::String)) {
            type_error(*v, std::string(what) + " \"category\"", "string");
            return std::nullopt;
        }
        auto c = category_from_name(v->string);
        if (!c) error(v->pos, ParseErrorCode::TypeMismatch, "unknown category \"" + v->string + "\"");
        return c;
    }

    std::optional<DurationDistribution> duration(const json::Value& v) {
        static constexpr std::string_view kTri[] = {"type", "min", "mode", "max"};
        static constexpr std::string_view kDet[] = {"type", "value"};
        if (!v.is(json::Kind::Object)) {
            type_error(v, "duration", "object");
            return std::nullopt;
        }
        auto type = string(v, "type", "duration");
        if (!type) return std::nullopt;
        if (*type == "triangular") {
            object(v, "triangular duration", kTri);
            auto a = number(v, "min", "triangular duration");
            auto m = number(v, "mode", "triangular duration");
            auto b = number(v, "max", "triangular duration");
            if (!a || !m || !b) return std::nullopt;
            return Triangular{*a, *m, *b};
        }
        if (*type == "deterministic") {
            object(v, "deterministic duration", kDet);
            auto value = number(v, "value", "deterministic duration");
            if (!value) return std::nullopt;
            return Deterministic{*value};
        }
        error(find(v, "type")->pos, ParseErrorCode::TypeMismatch, "unknown duration type \"" + *type + "\"");
        return std::nullopt;
    }

    std::optional<Task> task(const json::Value& v) {
        static constexpr std::string_view kKeys[] = {"kind", "id", "label", "stakeholder", "category", "duration",
                                                     "provenance"};
        if (!object(v, "task", kKeys)) return std::nullopt;
        Task t;
        auto id = string(v, "id", "task");
        auto label = string(v, "label", "task");
        auto stakeholder = string(v, "stakeholder", "task");
        auto cat = category(v, "task");
        std::optional<DurationDistribution> dur;
        if (const json::Value* d = require(v, "duration", "task")) dur = duration(*d);
        auto prov = string(v, "provenance", "task", false);
        if (!id || !label || !stakeholder || !cat || !dur) return std::nullopt;
        t.id = *id;
        t.label = *label;
        t.stakeholder = *stakeholder;
        t.category = *cat;
        t.duration = *dur;
        if (prov) t.provenance = *prov;
        return t;
    }

    std::optional<Parallel> parallel(const json::Value& v) {
        static constexpr std::string_view kKeys[] = {"kind", "id", "branches"};
        if (!object(v, "parallel", kKeys)) return std::nullopt;
        Parallel p;
        auto id = string(v, "id", "parallel");
        const json::Value* branches = require(v, "branches", "parallel");
        bool ok = id.has_value();
        if (branches != nullptr && !branches->is(json::Kind::Array)) {
            type_error(*branches, "parallel \"branches\"", "array of task arrays");
            ok = false;
        } else if (branches != nullptr) {
            for (const auto& branch : branches->items) {
                if (!branch.is(json::Kind::Array)) {
                    type_error(branch, "parallel branch", "array of tasks");
                    ok = false;
                    continue;
                }
                std::vector<Task> tasks;
                for (const auto& item : branch.items) {
                    auto t = branch_task(item);
                    if (t) {
                        tasks.push_back(std::move(*t));
                    } else {
                        ok = false;
                    }
                }
                p.branches.push_back(std::move(tasks));
            }
        } else {
            ok = false;
        }
        if (!ok) return std::nullopt;
        p.id = *id;
        return p;
    }

    std::optional<Task> branch_task(const json::Value& v) {
        if (!v.is(json::Kind::Object)) {
            type_error(v, "parallel branch element", "task object");
            return std::nullopt;
        }
        auto kind = string(v, "kind", "branch step");
        if (!kind) return std::nullopt;
        if (*kind != "task") {
            error(find(v, "kind")->pos, ParseErrorCode::TypeMismatch,
                  "parallel branches may only contain tasks, found kind \"" + *kind + "\"");
            return std::nullopt;
        }
        return task(v);
    }

    std::optional<Decision> decision(const json::Value& v) {
        static constexpr std::string_view kKeys[] = {"kind", "id", "label", "probability", "target", "provenance"};
        if (!object(v, "decision", kKeys)) return std::nullopt;
        auto id = string(v, "id", "decision");
        auto label = string(v, "label", "decision");
        auto p = number(v, "probability", "decision");
        auto target = string(v, "target", "decision");
        auto prov = string(v, "provenance", "decision", false);
        if (!id || !label || !p || !target) return std::nullopt;
        Decision d{*id, *label, *p, *target, prov.value_or("")};
        return d;
    }

    std::optional<Step> step(const json::Value& v) {
        if (!v.is(json::Kind::Object)) {
            type_error(v, "step", "object");
            return std::nullopt;
        }
        auto kind = string(v, "kind", "step");
        if (!kind) return std::nullopt;
        if (*kind == "task") {
            if (auto t = task(v)) return Step{std::move(*t)};
            return std::nullopt;
        }
        if (*kind == "parallel") {
            if (auto p = parallel(v)) return Step{std::move(*p)};
            return std::nullopt;
        }
        if (*kind == "decision") {
            if (auto d = decision(v)) return Step{std::move(*d)};
            return std::nullopt;
        }
        error(find(v, "kind")->pos, ParseErrorCode::TypeMismatch, "unknown step kind \"" + *kind + "\"");
        return std::nullopt;
    }

private:
    std::string source_;
};

/// Position of the "id" value of a step object, for duplicate reporting.
inline json::Position id_position(const json::Value& step) {
    for (const auto& m : step.members) {
        if (m.key == "id") return m.value.pos;
    }
    return step.pos;
}

inline ParseErrors syntax_error(const json::SyntaxError& e, std::string_view source) {
    return ParseErrors{ParseError{std::string(source), e.position().line, e.position().column,
                                  ParseErrorCode::Syntax, e.what()}};
}

}  // namespace detail

/// Parses a model document. Succeeds on any shape-correct document, even one
/// that later fails validate_model.
inline ParseResult<ProcessModel> parse_model(std::string_view text, std::string_view source = "<input>") {
    json::Value root;
    try {
        root = json::parse(text);
    } catch (const json::SyntaxError& e) {
        return detail::syntax_error(e, source);
    }

    static constexpr std::string_view kKeys[] = {"name", "description", "stakeholders", "steps"};
    detail::SchemaReader r{std::string(source)};
    if (!r.object(root, "model", kKeys)) return std::move(r.errors);

    ProcessModel model;
    auto name = r.string(root, "name", "model");
    auto description = r.string(root, "description", "model", false);
    auto stakeholders = r.string_list(root, "stakeholders", "model");

    // Duplicate ids are caught here as well as in validate_model: a document
    // cannot be a well-formed id namespace otherwise.
    std::unordered_set<std::string> ids;
    auto note_id = [&](const json::Value& obj, const std::string& id) {
        if (!ids.insert(id).second) {
            r.error(detail::id_position(obj), ParseErrorCode::DuplicateId, "duplicate step id \"" + id + "\"");
        }
    };

    const json::Value* steps = r.require(root, "steps", "model");
    if (steps != nullptr && !steps->is(json::Kind::Array)) {
        r.type_error(*steps, "model \"steps\"", "array of steps");
    } else if (steps != nullptr) {
        for (const auto& item : steps->items) {
            auto s = r.step(item);
            if (!s) continue;
            note_id(item, step_id(*s));
            if (const auto* p = std::get_if<Parallel>(&*s)) {
                const json::Value* branches = r.find(item, "branches");
                for (std::size_t b = 0; b < p->branches.size(); ++b) {
                    for (std::size_t t = 0; t < p->branches[b].size(); ++t) {
                        note_id(branches->items[b].items[t], p->branches[b][t].id);
                    }
                }
            }
            model.steps.push_back(std::move(*s));
        }
    }

    if (!r.errors.empty()) return std::move(r.errors);
    model.name = *name;
    model.description = description.value_or("");
    model.stakeholders = std::move(*stakeholders);
    return model;
}

/// Parses a scenario document.
inline ParseResult<Scenario> parse_scenario(std::string_view text, std::string_view source = "<input>") {
    json::Value root;
    try {
        root = json::parse(text);
    } catch (const json::SyntaxError& e) {
        return detail::syntax_error(e, source);
    }

    static constexpr std::string_view kKeys[] = {"name", "description", "ops"};
    detail::SchemaReader r{std::string(source)};
    if (!r.object(root, "scenario", kKeys)) return std::move(r.errors);

    Scenario scenario;
    auto name = r.string(root, "name", "scenario");
    auto description = r.string(root, "description", "scenario", false);

    const json::Value* ops = r.require(root, "ops", "scenario");
    if (ops != nullptr && !ops->is(json::Kind::Array)) {
        r.type_error(*ops, "scenario \"ops\"", "array of ops");
    } else if (ops != nullptr) {
        for (const auto& item : ops->items) {
            if (!item.is(json::Kind::Object)) {
                r.type_error(item, "op", "object");
                continue;
            }
            auto kind = r.string(item, "op", "op");
            if (!kind) continue;
            auto prov = [&] { return r.string(item, "provenance", "op", false).value_or(""); };
            if (*kind == "remove_tasks") {
                static constexpr std::string_view k[] = {"op", "ids", "provenance"};
                r.object(item, "remove_tasks op", k);
                auto ids = r.string_list(item, "ids", "remove_tasks op");
                if (ids) scenario.ops.emplace_back(RemoveTasks{std::move(*ids), prov()});
            } else if (*kind == "scale_duration") {
                static constexpr std::string_view k[] = {"op", "selector", "factor", "provenance"};
                static constexpr std::string_view ks[] = {"ids", "category"};
                r.object(item, "scale_duration op", k);
                auto factor = r.number(item, "factor", "scale_duration op");
                std::optional<TaskSelector> selector;
                if (const json::Value* sel = r.require(item, "selector", "scale_duration op")) {
                    if (r.object(*sel, "selector", ks)) {
                        const bool has_ids = r.find(*sel, "ids") != nullptr;
                        const bool has_cat = r.find(*sel, "category") != nullptr;
                        if (has_ids && has_cat) {
                            r.error(sel->pos, ParseErrorCode::TypeMismatch,
                                    "selector must have exactly one of \"ids\" or \"category\"");
                        } else if (has_ids) {
                            if (auto ids = r.string_list(*sel, "ids", "selector")) selector = IdSelector{*ids};
                        } else if (has_cat) {
                            if (auto c = r.category(*sel, "selector")) selector = CategorySelector{*c};
                        } else {
                            r.error(sel->pos, ParseErrorCode::MissingKey,
                                    "selector needs \"ids\" or \"category\"");
                        }
                    }
                }
                if (factor && selector) scenario.ops.emplace_back(ScaleDuration{*selector, *factor, prov()});
            } else if (*kind == "replace_duration") {
                static constexpr std::string_view k[] = {"op", "id", "duration", "provenance"};
                r.object(item, "replace_duration op", k);
                auto id = r.string(item, "id", "replace_duration op");
                std::optional<DurationDistribution> dur;
                if (const json::Value* d = r.require(item, "duration", "replace_duration op")) dur = r.duration(*d);
                if (id && dur) scenario.ops.emplace_back(ReplaceDuration{*id, *dur, prov()});
            } else if (*kind == "set_probability") {
                static constexpr std::string_view k[] = {"op", "id", "value", "provenance"};
                r.object(item, "set_probability op", k);
                auto id = r.string(item, "id", "set_probability op");
                auto value = r.number(item, "value", "set_probability op");
                if (id && value) scenario.ops.emplace_back(SetProbability{*id, *value, prov()});
            } else {
                r.error(r.find(item, "op")->pos, ParseErrorCode::TypeMismatch, "unknown op \"" + *kind + "\"");
            }
        }
    }

    if (!r.errors.empty()) return std::move(r.errors);
    scenario.name = *name;
    scenario.description = description.value_or("");
    return scenario;
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

/// Fixed 6-decimal rendering with trailing zeros (and a bare point) trimmed.
inline std::string format_number(double v) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

inline std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

namespace detail {

inline std::string string_array(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        out += quote(items[i]);
    }
    return out + "]";
}

inline std::string duration_json(const DurationDistribution& d) {
    if (const auto* t = std::get_if<Triangular>(&d)) {
        return "{\"type\": \"triangular\", \"min\": " + format_number(t->min) + ", \"mode\": " +
               format_number(t->mode) + ", \"max\": " + format_number(t->max) + "}";
    }
    return "{\"type\": \"deterministic\", \"value\": " + format_number(std::get<Deterministic>(d).value) + "}";
}

inline std::string task_json(const Task& t) {
    std::string out = "{\"kind\": \"task\", \"id\": " + quote(t.id) + ", \"label\": " + quote(t.label) +
                      ", \"stakeholder\": " + quote(t.stakeholder) + ", \"category\": " +
                      quote(category_name(t.category)) + ", \"duration\": " + duration_json(t.duration);
    if (!t.provenance.empty()) out += ", \"provenance\": " + quote(t.provenance);
    return out + "}";
}

}  // namespace detail

inline std::string serialize_model(const ProcessModel& model) {
    std::string out = "{\n  \"name\": " + quote(model.name) + ",\n";
    if (!model.description.empty()) out += "  \"description\": " + quote(model.description) + ",\n";
    out += "  \"stakeholders\": " + detail::string_array(model.stakeholders) + ",\n";
    if (model.steps.empty()) return out + "  \"steps\": []\n}\n";
    out += "  \"steps\": [\n";
    for (std::size_t i = 0; i < model.steps.size(); ++i) {
        const Step& step = model.steps[i];
        out += "    ";
        if (const auto* t = std::get_if<Task>(&step)) {
            out += detail::task_json(*t);
        } else if (const auto* p = std::get_if<Parallel>(&step)) {
            out += "{\"kind\": \"parallel\", \"id\": " + quote(p->id) + ", \"branches\": [";
            if (!p->branches.empty()) {
                out += "\n";
                for (std::size_t b = 0; b < p->branches.size(); ++b) {
                    const auto& branch = p->branches[b];
                    if (branch.empty()) {
                        out += "      []";
                    } else {
                        out += "      [\n";
                        for (std::size_t k = 0; k < branch.size(); ++k) {
                            out += "        " + detail::task_json(branch[k]);
                            out += k + 1 < branch.size() ? ",\n" : "\n";
                        }
                        out += "      ]";
                    }
                    out += b + 1 < p->branches.size() ? ",\n" : "\n";
                }
                out += "    ";
            }
            out += "]}";
        } else {
            const auto& d = std::get<Decision>(step);
            out += "{\"kind\": \"decision\", \"id\": " + quote(d.id) + ", \"label\": " + quote(d.label) +
                   ", \"probability\": " + format_number(d.probability) + ", \"target\": " + quote(d.target);
            if (!d.provenance.empty()) out += ", \"provenance\": " + quote(d.provenance);
            out += "}";
        }
        out += i + 1 < model.steps.size() ? ",\n" : "\n";
    }
    return out + "  ]\n}\n";
}

inline std::string serialize_scenario(const Scenario& scenario) {
    std::string out = "{\n  \"name\": " + quote(scenario.name) + ",\n";
    if (!scenario.description.empty()) out += "  \"description\": " + quote(scenario.description) + ",\n";
    if (scenario.ops.empty()) return out + "  \"ops\": []\n}\n";
    out += "  \"ops\": [\n";
    for (std::size_t i = 0; i < scenario.ops.size(); ++i) {
        const TransformOp& op = scenario.ops[i];
        out += "    {\"op\": " + quote(op_name(op));
        const std::string* prov = nullptr;
        if (const auto* r = std::get_if<RemoveTasks>(&op)) {
            out += ", \"ids\": " + detail::string_array(r->ids);
            prov = &r->provenance;
        } else if (const auto* s = std::get_if<ScaleDuration>(&op)) {
            if (const auto* ids = std::get_if<IdSelector>(&s->selector)) {
                out += ", \"selector\": {\"ids\": " + detail::string_array(ids->ids) + "}";
            } else {
                out += ", \"selector\": {\"category\": " +
                       quote(category_name(std::get<CategorySelector>(s->selector).category)) + "}";
            }
            out += ", \"factor\": " + format_number(s->factor);
            prov = &s->provenance;
        } else if (const auto* rd = std::get_if<ReplaceDuration>(&op)) {
            out += ", \"id\": " + quote(rd->id) + ", \"duration\": " + detail::duration_json(rd->duration);
            prov = &rd->provenance;
        } else {
            const auto& sp = std::get<SetProbability>(op);
            out += ", \"id\": " + quote(sp.id) + ", \"value\": " + format_number(sp.value);
            prov = &sp.provenance;
        }
        if (!prov->empty()) out += ", \"provenance\": " + quote(*prov);
        out += "}";
        out += i + 1 < scenario.ops.size() ? ",\n" : "\n";
    }
    return out + "  ]\n}\n";
}

}  // namespace schedrisk
