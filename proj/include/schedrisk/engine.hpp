#pragma once

// Monte Carlo engine: inverse-transform sampling of task durations, a
// program-counter interpreter for one process execution, and seeded batch
// runs whose results do not depend on how iterations are scheduled.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "schedrisk/model.hpp"
#include "schedrisk/random.hpp"

namespace schedrisk {

/// Inverse CDF of the distribution at u ∈ [0, 1). With F(mode) = (m−a)/(b−a):
/// u ≤ F(mode) → a + √(u(b−a)(m−a)), otherwise b − √((1−u)(b−a)(b−m)).
/// The result always lies in [min, max].
inline double inverse_cdf(const DurationDistribution& dist, double u) {
    if (const auto* t = std::get_if<Triangular>(&dist)) {
        const double a = t->min;
        const double m = t->mode;
        const double b = t->max;
        const double width = b - a;
        if (!(width > 0.0)) return a;
        const double at_mode = (m - a) / width;
        const double x = u <= at_mode ? a + std::sqrt(u * width * (m - a))
                                      : b - std::sqrt((1.0 - u) * width * (b - m));
        return std::clamp(x, a, b);
    }
    return std::get<Deterministic>(dist).value;
}

/// One random event of an iteration: the `occurrence`-th execution of a task
/// or the `occurrence`-th visit of a decision.
struct Event {
    std::string_view id;
    std::uint64_t id_hash = 0;
    std::uint64_t occurrence = 0;
};

/// Default uniform source for an iteration.
struct SeededSource {
    std::uint64_t master_seed = 0;
    std::uint64_t iteration = 0;

    double operator()(const Event& e) const noexcept {
        return event_uniform(master_seed, iteration, e.id_hash, e.occurrence);
    }
};

struct IterationOutcome {
    double total = 0.0;                                // makespan, days
    std::array<double, kCategoryCount> category_work{};  // summed executed work, days
    std::map<std::string, std::uint64_t> loop_firings;   // every decision, fired or not

    [[nodiscard]] double work(TaskCategory c) const { return category_work[category_index(c)]; }

    [[nodiscard]] double work_sum() const {
        double s = 0.0;
        for (double w : category_work) s += w;
        return s;
    }

    friend bool operator==(const IterationOutcome&, const IterationOutcome&) = default;
};

inline constexpr std::uint64_t kDefaultIterations = 10'000;
inline constexpr std::uint64_t kDefaultExecutionCap = 1'000'000;

struct SimulationConfig {
    std::uint64_t iterations = kDefaultIterations;
    std::uint64_t master_seed = 0;
    std::uint64_t execution_cap = kDefaultExecutionCap;
    unsigned workers = 1;  // does not affect results

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct ResultSet {
    SimulationConfig config;
    std::string model_name;
    std::vector<IterationOutcome> outcomes;  // index = iteration

    friend bool operator==(const ResultSet& a, const ResultSet& b) {
        return a.model_name == b.model_name && a.config.iterations == b.config.iterations &&
               a.config.master_seed == b.config.master_seed && a.outcomes == b.outcomes;
    }
};

class ExecutionCapExceeded : public std::runtime_error {
public:
    ExecutionCapExceeded(std::uint64_t iteration, std::uint64_t cap)
        : std::runtime_error("iteration " + std::to_string(iteration) + " exceeded the execution cap of " +
                             std::to_string(cap) + " steps"),
          iteration_(iteration),
          cap_(cap) {}

    [[nodiscard]] std::uint64_t iteration() const noexcept { return iteration_; }
    [[nodiscard]] std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t iteration_;
    std::uint64_t cap_;
};

/// A model lowered to index form for repeated execution. Holds its own copy
/// of every id, so it does not reference the source model.
class Program {
public:
    explicit Program(const ProcessModel& model) {
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < model.steps.size(); ++i) index.emplace(step_id(model.steps[i]), i);

        for (const Step& step : model.steps) {
            if (const auto* t = std::get_if<Task>(&step)) {
                ops_.emplace_back(lower(*t));
            } else if (const auto* p = std::get_if<Parallel>(&step)) {
                ParallelOp op;
                for (const auto& branch : p->branches) {
                    auto& lowered = op.branches.emplace_back();
                    for (const Task& t : branch) lowered.push_back(lower(t));
                }
                ops_.emplace_back(std::move(op));
            } else {
                const auto& d = std::get<Decision>(step);
                auto it = index.find(d.target);
                if (it == index.end()) throw std::invalid_argument("decision '" + d.id + "' has unknown target");
                ops_.emplace_back(DecisionOp{d.id, stable_hash(d.id), d.probability, it->second,
                                             decision_ids_.size()});
                decision_ids_.push_back(d.id);
            }
        }
    }

    [[nodiscard]] std::size_t step_count() const noexcept { return ops_.size(); }

    /// Executes the process once, drawing every uniform from `source`.
    template <class Source>
    IterationOutcome run(Source&& source, std::uint64_t execution_cap = kDefaultExecutionCap,
                         std::uint64_t iteration = 0) const {
        IterationOutcome out;
        std::vector<std::uint64_t> executions(task_count_, 0);
        std::vector<std::uint64_t> visits(decision_ids_.size(), 0);
        std::vector<std::uint64_t> firings(decision_ids_.size(), 0);

        auto sample = [&](const TaskOp& t) {
            const double u = source(Event{t.id, t.hash, executions[t.slot]++});
            const double d = inverse_cdf(t.duration, u);
            out.category_work[category_index(t.category)] += d;
            return d;
        };

        std::size_t pc = 0;
        std::uint64_t executed = 0;
        while (pc < ops_.size()) {
            if (++executed > execution_cap) throw ExecutionCapExceeded(iteration, execution_cap);
            const Op& op = ops_[pc];
            if (const auto* t = std::get_if<TaskOp>(&op)) {
                out.total += sample(*t);
                ++pc;
            } else if (const auto* p = std::get_if<ParallelOp>(&op)) {
                double longest = 0.0;
                for (const auto& branch : p->branches) {
                    double span = 0.0;
                    for (const TaskOp& t : branch) span += sample(t);
                    longest = std::max(longest, span);
                }
                out.total += longest;
                ++pc;
            } else {
                const auto& d = std::get<DecisionOp>(op);
                const double u = source(Event{d.id, d.hash, visits[d.slot]++});
                if (u < d.probability) {
                    ++firings[d.slot];
                    pc = d.target;
                } else {
                    ++pc;
                }
            }
        }

        for (std::size_t i = 0; i < decision_ids_.size(); ++i) out.loop_firings.emplace(decision_ids_[i], firings[i]);
        return out;
    }

private:
    struct TaskOp {
        std::string id;
        std::uint64_t hash = 0;
        TaskCategory category{};
        DurationDistribution duration;
        std::size_t slot = 0;
    };
    struct ParallelOp {
        std::vector<std::vector<TaskOp>> branches;
    };
    struct DecisionOp {
        std::string id;
        std::uint64_t hash = 0;
        double probability = 0.0;
        std::size_t target = 0;
        std::size_t slot = 0;
    };
    using Op = std::variant<TaskOp, ParallelOp, DecisionOp>;

    TaskOp lower(const Task& t) { return TaskOp{t.id, stable_hash(t.id), t.category, t.duration, task_count_++}; }

    std::vector<Op> ops_;
    std::vector<std::string> decision_ids_;
    std::size_t task_count_ = 0;
};

/// One execution of `model` with draws keyed by (master_seed, iteration).
inline IterationOutcome simulate_once(const ProcessModel& model, std::uint64_t master_seed, std::uint64_t iteration,
                                      std::uint64_t execution_cap = kDefaultExecutionCap) {
    return Program(model).run(SeededSource{master_seed, iteration}, execution_cap, iteration);
}

/// Runs `config.iterations` executions; outcome i equals
/// simulate_once(model, config.master_seed, i) for any worker count.
/// Throws std::invalid_argument on an invalid model or config and
/// ExecutionCapExceeded (lowest failing iteration) if an execution runs away.
inline ResultSet run_monte_carlo(const ProcessModel& model, const SimulationConfig& config) {
    if (config.iterations == 0) throw std::invalid_argument("iterations must be at least 1");
    if (auto diags = validate_model(model); !diags.empty()) {
        throw std::invalid_argument("model is invalid: " + diags.front().step_id + ": " + diags.front().message);
    }
    if (config.execution_cap < model.steps.size()) {
        throw std::invalid_argument("execution cap is smaller than the model's step count");
    }

    const Program program(model);
    ResultSet rs;
    rs.config = config;
    rs.model_name = model.name;
    rs.outcomes.resize(config.iterations);

    const std::uint64_t n = config.iterations;
    const std::uint64_t workers = std::clamp<std::uint64_t>(config.workers, 1, n);

    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::uint64_t failed_at = n;

    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            try {
                rs.outcomes[i] = program.run(SeededSource{config.master_seed, i}, config.execution_cap, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rs;
}

}  // namespace schedrisk
