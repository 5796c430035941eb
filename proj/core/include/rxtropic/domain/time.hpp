/**
 * @file time.hpp
 * @brief UTC timestamp formatting and the injectable clock
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <atomic>
#include <optional>
#include <string>
#include <string_view>

namespace rxtropic {

/// "YYYY-MM-DDTHH:MM:SS.mmmZ"
std::string format_timestamp(Timestamp ts);

/// Accepts "YYYY-MM-DDTHH:MM:SS[.fff]Z".
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// "YYYY-MM-DD"
std::string format_date(Date date);

std::optional<Date> parse_date(std::string_view text);

/// UTC calendar day containing ts.
Date to_date(Timestamp ts);

class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
public:
    Timestamp now() const override;
};

/// Test clock that only moves when told to. Thread-safe.
class ManualClock final : public Clock {
public:
    explicit ManualClock(Timestamp start);

    Timestamp now() const override;
    void set(Timestamp ts);
    void advance(std::chrono::milliseconds delta);

private:
    std::atomic<std::int64_t> millis_;
};

}  // namespace rxtropic
