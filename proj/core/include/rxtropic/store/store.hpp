/**
 * @file store.hpp
 * @brief Durable record store with an append-only audit log
 *
 * The store is an embedded SQLite database in write-ahead-log mode kept in a
 * single directory. Writes are serialized through one connection and run as
 * IMMEDIATE transactions. Snapshots use pooled reader connections, so a
 * snapshot observes one committed state and never blocks writers.
 *
 * A store directory is held exclusively by one process at a time (advisory
 * file lock); a second open fails with STORE_UNAVAILABLE.
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

struct sqlite3;

namespace rxtropic::store {

/// Actor id recorded for operator and seed actions.
inline constexpr std::string_view system_actor = "SYSTEM";

struct AuditEntry {
    std::uint64_t seq = 0;
    Timestamp at{};
    std::string actor_id;
    std::string action;
    std::string entity_kind;
    std::string entity_id;
    nlohmann::json detail = nlohmann::json::object();

    bool operator==(const AuditEntry&) const = default;
};

/// An audit entry before the store assigns its sequence number.
struct AuditDraft {
    Timestamp at{};
    std::string actor_id;
    std::string action;
    std::string entity_kind;
    std::string entity_id;
    nlohmann::json detail = nlohmann::json::object();
};

nlohmann::json to_json(const AuditEntry& entry);

struct AccountFilter {
    std::optional<Role> role;
    std::optional<bool> active;
};

struct PatientFilter {
    std::string name_contains;  ///< case-insensitive substring; empty matches all
    std::optional<bool> active;
};

struct DrugFilter {
    std::string name_contains;
    std::optional<bool> active;
};

struct PrescriptionFilter {
    std::optional<PrescriptionStatus> status;
    std::optional<Id> patient_id;
    std::optional<Id> prescriber_id;
    std::optional<Id> pharmacist_id;
};

/**
 * @brief Read surface shared by snapshots and write transactions.
 *
 * find_* return nullopt when absent; get_* throw Error(NOT_FOUND).
 * list_* return records sorted by (name key, id) or, for prescriptions and
 * rules, by id / pair key.
 */
class Reader {
public:
    Reader(const Reader&) = delete;
    Reader& operator=(const Reader&) = delete;

    std::optional<PractitionerAccount> find_account(const Id& id) const;
    std::optional<PractitionerAccount> find_account_by_license(std::string_view license) const;
    PractitionerAccount get_account(const Id& id) const;
    std::vector<PractitionerAccount> list_accounts(const AccountFilter& filter = {}) const;

    std::optional<Patient> find_patient(const Id& id) const;
    Patient get_patient(const Id& id) const;
    std::vector<Patient> list_patients(const PatientFilter& filter = {}) const;

    std::optional<Disease> find_disease(const Id& id) const;
    std::optional<Disease> find_disease_by_name(std::string_view name) const;
    Disease get_disease(const Id& id) const;
    std::vector<Disease> list_diseases() const;

    std::optional<Drug> find_drug(const Id& id) const;
    std::optional<Drug> find_drug_by_name(std::string_view name) const;
    Drug get_drug(const Id& id) const;
    std::vector<Drug> list_drugs(const DrugFilter& filter = {}) const;

    std::optional<InteractionRule> find_rule(const DrugPair& pair) const;
    std::vector<InteractionRule> list_rules() const;

    std::optional<Prescription> find_prescription(const Id& id) const;
    Prescription get_prescription(const Id& id) const;
    std::vector<Prescription> list_prescriptions(const PrescriptionFilter& filter = {}) const;

    /// Raw stored JSON body of a prescription (for byte-identity checks).
    std::optional<std::string> prescription_body(const Id& id) const;

    /// Entries in strictly increasing seq; optionally only one entity's history.
    std::vector<AuditEntry> audit_scan(const std::optional<std::string>& entity_id = {}) const;
    std::uint64_t audit_count() const;
    std::uint64_t audit_head() const;  ///< highest seq, 0 when empty

protected:
    explicit Reader(sqlite3* db) : db_(db) {}
    ~Reader() = default;

    sqlite3* db_;
};

/// Read-only, transaction-consistent view. Move-only; releases on destruction.
class Snapshot final : public Reader {
public:
    Snapshot(Snapshot&& other) noexcept;
    Snapshot& operator=(Snapshot&&) = delete;
    ~Snapshot();

private:
    friend class Store;
    using Release = std::function<void(sqlite3*)>;
    Snapshot(sqlite3* db, Release release);

    Release release_;
};

/// Open write transaction. Only reachable inside Store::write.
class Transaction final : public Reader {
public:
    /// Insert or replace by id. UNIQUE_VIOLATION on license/name clashes.
    void put(const PractitionerAccount& account);
    void put(const Patient& patient);
    void put(const Disease& disease);
    void put(const Drug& drug);
    void put(const InteractionRule& rule);
    void put(const Prescription& prescription);

    /// Hard deletes; NOT_FOUND when absent.
    void remove_disease(const Id& id);
    void remove_rule(const DrugPair& pair);

    AuditEntry append_audit(const AuditDraft& draft);

private:
    friend class Store;
    explicit Transaction(sqlite3* db) : Reader(db) {}
};

struct StoreOptions {
    /// fsync on every commit (synchronous=FULL). NORMAL survives process
    /// crashes but not power loss.
    bool full_sync = true;
};

class Store {
public:
    /// Opens or creates the store under `directory`.
    /// Throws Error(STORE_UNAVAILABLE) when unopenable or locked.
    static Store open(const std::filesystem::path& directory, StoreOptions options = {});

    Store(Store&&) noexcept;
    Store& operator=(Store&&) noexcept;
    ~Store();

    const std::filesystem::path& directory() const noexcept;

    Snapshot snapshot() const;

    /// Runs `fn` in one serializable write transaction. Commits on return,
    /// rolls back and rethrows on exception.
    template <typename Fn>
    auto write(Fn&& fn) -> std::invoke_result_t<Fn, Transaction&> {
        using Result = std::invoke_result_t<Fn, Transaction&>;
        if constexpr (std::is_void_v<Result>) {
            run_write([&](Transaction& txn) { fn(txn); });
        } else {
            std::optional<Result> result;
            run_write([&](Transaction& txn) { result.emplace(fn(txn)); });
            return std::move(*result);
        }
    }

    /// Receives the record, a reader inside the same transaction, and the audit
    /// detail object it may extend.
    using Mutator = std::function<void(Prescription&, const Reader&, nlohmann::json&)>;

    /**
     * @brief Atomic compare-and-set on a prescription's status.
     *
     * Illegal edges are rejected with WRONG_STATE before any storage access.
     * Inside one transaction: load (NOT_FOUND), compare status with `expected`
     * (CONFLICT on mismatch), apply `mutate`, set `next`, validate, store and
     * append `audit`. Any exception leaves the record unchanged.
     */
    Prescription transition(const Id& id, PrescriptionStatus expected, PrescriptionStatus next,
                            const Mutator& mutate, const AuditDraft& audit);

    AuditEntry audit_append(const AuditDraft& draft);
    std::vector<AuditEntry> audit_scan(const std::optional<std::string>& entity_id = {}) const;

private:
    struct Impl;
    explicit Store(std::unique_ptr<Impl> impl);
    void run_write(const std::function<void(Transaction&)>& fn);

    std::unique_ptr<Impl> impl_;
};

}  // namespace rxtropic::store
