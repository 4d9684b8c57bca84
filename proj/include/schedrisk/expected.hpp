#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace schedrisk {

/// Value-or-error holder for operations whose failures are ordinary data
/// (parse errors, transform errors) rather than exceptional conditions.
template <class T, class E>
class Expected {
public:
    Expected(T value) : state_(std::in_place_index<0>, std::move(value)) {}
    Expected(E error) : state_(std::in_place_index<1>, std::move(error)) {}

    [[nodiscard]] bool has_value() const noexcept { return state_.index() == 0; }
    explicit operator bool() const noexcept { return has_value(); }

    const T& value() const& {
        if (!has_value()) throw std::logic_error("Expected: value() called on error state");
        return std::get<0>(state_);
    }
    T& value() & {
        if (!has_value()) throw std::logic_error("Expected: value() called on error state");
        return std::get<0>(state_);
    }
    T&& value() && {
        if (!has_value()) throw std::logic_error("Expected: value() called on error state");
        return std::get<0>(std::move(state_));
    }

    const E& error() const& {
        if (has_value()) throw std::logic_error("Expected: error() called on value state");
        return std::get<1>(state_);
    }

    const T& operator*() const& { return value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, E> state_;
};

}  // namespace schedrisk
