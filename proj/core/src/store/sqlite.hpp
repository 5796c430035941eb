/**
 * @file sqlite.hpp
 * @brief Thin RAII helpers over the SQLite C API (private to the store)
 */

#pragma once

#include <sqlite3.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rxtropic::store::sql {

/// Throws Error(UNIQUE_VIOLATION) for unique-constraint failures and
/// Error(STORE_UNAVAILABLE) otherwise.
[[noreturn]] void raise(sqlite3* db, int rc, std::string_view context);

void exec(sqlite3* db, const char* sql);

class Statement {
public:
    Statement(sqlite3* db, std::string_view sql);
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;
    ~Statement();

    Statement& bind(int index, std::string_view value);
    Statement& bind(int index, std::int64_t value);
    Statement& bind_null(int index);
    Statement& bind(int index, const std::optional<std::int64_t>& value);

    /// Advances; true while a row is available.
    bool step();
    /// Runs a statement that returns no rows.
    void run();

    std::string column_text(int index) const;
    std::int64_t column_int(int index) const;
    bool column_is_null(int index) const;

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace rxtropic::store::sql
