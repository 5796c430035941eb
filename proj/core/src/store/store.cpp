/**
 * @file store.cpp
 * @brief SQLite-backed record store, snapshots, and atomic transitions
 */

#include "rxtropic/store/store.hpp"

#include "rxtropic/domain/error.hpp"
#include "rxtropic/domain/json.hpp"
#include "rxtropic/domain/time.hpp"
#include "rxtropic/domain/validation.hpp"
#include "store/sqlite.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <mutex>

namespace rxtropic::store {

using nlohmann::json;

namespace {

constexpr const char* schema_sql = R"sql(
CREATE TABLE IF NOT EXISTS accounts (
    id          TEXT PRIMARY KEY,
    license_key TEXT NOT NULL UNIQUE,
    name_key    TEXT NOT NULL,
    role        TEXT NOT NULL,
    active      INTEGER NOT NULL,
    body        TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS patients (
    id       TEXT PRIMARY KEY,
    name_key TEXT NOT NULL,
    active   INTEGER NOT NULL,
    body     TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS diseases (
    id       TEXT PRIMARY KEY,
    name_key TEXT NOT NULL UNIQUE,
    body     TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS drugs (
    id       TEXT PRIMARY KEY,
    name_key TEXT NOT NULL UNIQUE,
    active   INTEGER NOT NULL,
    body     TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS interactions (
    pair_key TEXT PRIMARY KEY,
    drug_a   TEXT NOT NULL,
    drug_b   TEXT NOT NULL,
    body     TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS prescriptions (
    id            TEXT PRIMARY KEY,
    status        TEXT NOT NULL,
    patient_id    TEXT NOT NULL,
    prescriber_id TEXT NOT NULL,
    pharmacist_id TEXT,
    sent_at       INTEGER,
    body          TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS prescriptions_status ON prescriptions(status, sent_at, id);
CREATE INDEX IF NOT EXISTS prescriptions_patient ON prescriptions(patient_id);
CREATE TABLE IF NOT EXISTS audit (
    seq         INTEGER PRIMARY KEY,
    at          INTEGER NOT NULL,
    actor       TEXT NOT NULL,
    action      TEXT NOT NULL,
    entity_kind TEXT NOT NULL,
    entity_id   TEXT NOT NULL,
    detail      TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS audit_entity ON audit(entity_id, seq);
)sql";

std::int64_t millis(Timestamp ts) { return ts.time_since_epoch().count(); }

std::optional<std::int64_t> millis(const std::optional<Timestamp>& ts) {
    return ts ? std::optional<std::int64_t>(millis(*ts)) : std::nullopt;
}

template <typename T>
T decode(const std::string& body) {
    return json::parse(body).get<T>();
}

template <typename T>
std::optional<T> find_one(sqlite3* db, std::string_view sql, std::string_view key) {
    sql::Statement stmt(db, sql);
    stmt.bind(1, key);
    if (!stmt.step()) return std::nullopt;
    return decode<T>(stmt.column_text(0));
}

template <typename T>
std::vector<T> decode_all(sql::Statement& stmt) {
    std::vector<T> out;
    while (stmt.step()) out.push_back(decode<T>(stmt.column_text(0)));
    return out;
}

[[noreturn]] void not_found(std::string_view kind, std::string_view id) {
    throw Error(ErrorCode::not_found, std::string(kind) + " " + std::string(id) + " not found");
}

sqlite3* open_connection(const std::filesystem::path& file, bool full_sync) {
    sqlite3* db = nullptr;
    const int rc = sqlite3_open_v2(file.c_str(), &db,
                                   SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                                   nullptr);
    if (rc != SQLITE_OK) {
        std::string message = db ? sqlite3_errmsg(db) : sqlite3_errstr(rc);
        sqlite3_close(db);
        throw Error(ErrorCode::store_unavailable, "cannot open " + file.string() + ": " + message);
    }
    sqlite3_extended_result_codes(db, 1);
    sqlite3_busy_timeout(db, 5000);
    try {
        sql::exec(db, "PRAGMA journal_mode=WAL");
        sql::exec(db, full_sync ? "PRAGMA synchronous=FULL" : "PRAGMA synchronous=NORMAL");
    } catch (...) {
        sqlite3_close(db);
        throw;
    }
    return db;
}

}  // namespace

json to_json(const AuditEntry& entry) {
    return json{{"seq", entry.seq},
                {"at", format_timestamp(entry.at)},
                {"actor_id", entry.actor_id},
                {"action", entry.action},
                {"entity_kind", entry.entity_kind},
                {"entity_id", entry.entity_id},
                {"detail", entry.detail}};
}

// =============================================================================
// Reader
// =============================================================================

std::optional<PractitionerAccount> Reader::find_account(const Id& id) const {
    return find_one<PractitionerAccount>(db_, "SELECT body FROM accounts WHERE id = ?", id);
}

std::optional<PractitionerAccount> Reader::find_account_by_license(std::string_view license) const {
    return find_one<PractitionerAccount>(db_, "SELECT body FROM accounts WHERE license_key = ?",
                                         name_key(license));
}

PractitionerAccount Reader::get_account(const Id& id) const {
    auto found = find_account(id);
    if (!found) not_found("account", id);
    return *found;
}

std::vector<PractitionerAccount> Reader::list_accounts(const AccountFilter& filter) const {
    sql::Statement stmt(db_,
                        "SELECT body FROM accounts WHERE (?1 IS NULL OR role = ?1) "
                        "AND (?2 IS NULL OR active = ?2) ORDER BY name_key, id");
    if (filter.role) stmt.bind(1, to_string(*filter.role));
    if (filter.active) stmt.bind(2, std::int64_t{*filter.active});
    return decode_all<PractitionerAccount>(stmt);
}

std::optional<Patient> Reader::find_patient(const Id& id) const {
    return find_one<Patient>(db_, "SELECT body FROM patients WHERE id = ?", id);
}

Patient Reader::get_patient(const Id& id) const {
    auto found = find_patient(id);
    if (!found) not_found("patient", id);
    return *found;
}

std::vector<Patient> Reader::list_patients(const PatientFilter& filter) const {
    sql::Statement stmt(db_,
                        "SELECT body FROM patients WHERE instr(name_key, ?1) > 0 "
                        "AND (?2 IS NULL OR active = ?2) ORDER BY name_key, id");
    stmt.bind(1, name_key(filter.name_contains));
    if (filter.active) stmt.bind(2, std::int64_t{*filter.active});
    return decode_all<Patient>(stmt);
}

std::optional<Disease> Reader::find_disease(const Id& id) const {
    return find_one<Disease>(db_, "SELECT body FROM diseases WHERE id = ?", id);
}

std::optional<Disease> Reader::find_disease_by_name(std::string_view name) const {
    return find_one<Disease>(db_, "SELECT body FROM diseases WHERE name_key = ?", name_key(name));
}

Disease Reader::get_disease(const Id& id) const {
    auto found = find_disease(id);
    if (!found) not_found("disease", id);
    return *found;
}

std::vector<Disease> Reader::list_diseases() const {
    sql::Statement stmt(db_, "SELECT body FROM diseases ORDER BY name_key, id");
    return decode_all<Disease>(stmt);
}

std::optional<Drug> Reader::find_drug(const Id& id) const {
    return find_one<Drug>(db_, "SELECT body FROM drugs WHERE id = ?", id);
}

std::optional<Drug> Reader::find_drug_by_name(std::string_view name) const {
    return find_one<Drug>(db_, "SELECT body FROM drugs WHERE name_key = ?", name_key(name));
}

Drug Reader::get_drug(const Id& id) const {
    auto found = find_drug(id);
    if (!found) not_found("drug", id);
    return *found;
}

std::vector<Drug> Reader::list_drugs(const DrugFilter& filter) const {
    sql::Statement stmt(db_,
                        "SELECT body FROM drugs WHERE instr(name_key, ?1) > 0 "
                        "AND (?2 IS NULL OR active = ?2) ORDER BY name_key, id");
    stmt.bind(1, name_key(filter.name_contains));
    if (filter.active) stmt.bind(2, std::int64_t{*filter.active});
    return decode_all<Drug>(stmt);
}

std::optional<InteractionRule> Reader::find_rule(const DrugPair& pair) const {
    return find_one<InteractionRule>(db_, "SELECT body FROM interactions WHERE pair_key = ?",
                                     pair.key());
}

std::vector<InteractionRule> Reader::list_rules() const {
    sql::Statement stmt(db_, "SELECT body FROM interactions ORDER BY pair_key");
    return decode_all<InteractionRule>(stmt);
}

std::optional<Prescription> Reader::find_prescription(const Id& id) const {
    return find_one<Prescription>(db_, "SELECT body FROM prescriptions WHERE id = ?", id);
}

Prescription Reader::get_prescription(const Id& id) const {
    auto found = find_prescription(id);
    if (!found) not_found("prescription", id);
    return *found;
}

std::vector<Prescription> Reader::list_prescriptions(const PrescriptionFilter& filter) const {
    sql::Statement stmt(db_,
                        "SELECT body FROM prescriptions WHERE (?1 IS NULL OR status = ?1) "
                        "AND (?2 IS NULL OR patient_id = ?2) "
                        "AND (?3 IS NULL OR prescriber_id = ?3) "
                        "AND (?4 IS NULL OR pharmacist_id = ?4) ORDER BY id");
    if (filter.status) stmt.bind(1, to_string(*filter.status));
    if (filter.patient_id) stmt.bind(2, *filter.patient_id);
    if (filter.prescriber_id) stmt.bind(3, *filter.prescriber_id);
    if (filter.pharmacist_id) stmt.bind(4, *filter.pharmacist_id);
    return decode_all<Prescription>(stmt);
}

std::optional<std::string> Reader::prescription_body(const Id& id) const {
    sql::Statement stmt(db_, "SELECT body FROM prescriptions WHERE id = ?");
    stmt.bind(1, id);
    if (!stmt.step()) return std::nullopt;
    return stmt.column_text(0);
}

std::vector<AuditEntry> Reader::audit_scan(const std::optional<std::string>& entity_id) const {
    sql::Statement stmt(db_,
                        "SELECT seq, at, actor, action, entity_kind, entity_id, detail FROM audit "
                        "WHERE (?1 IS NULL OR entity_id = ?1) ORDER BY seq");
    if (entity_id) stmt.bind(1, *entity_id);
    std::vector<AuditEntry> out;
    while (stmt.step()) {
        AuditEntry e;
        e.seq = static_cast<std::uint64_t>(stmt.column_int(0));
        e.at = Timestamp{std::chrono::milliseconds{stmt.column_int(1)}};
        e.actor_id = stmt.column_text(2);
        e.action = stmt.column_text(3);
        e.entity_kind = stmt.column_text(4);
        e.entity_id = stmt.column_text(5);
        e.detail = json::parse(stmt.column_text(6));
        out.push_back(std::move(e));
    }
    return out;
}

std::uint64_t Reader::audit_count() const {
    sql::Statement stmt(db_, "SELECT count(*) FROM audit");
    stmt.step();
    return static_cast<std::uint64_t>(stmt.column_int(0));
}

std::uint64_t Reader::audit_head() const {
    sql::Statement stmt(db_, "SELECT COALESCE(MAX(seq), 0) FROM audit");
    stmt.step();
    return static_cast<std::uint64_t>(stmt.column_int(0));
}

// =============================================================================
// Snapshot
// =============================================================================

Snapshot::Snapshot(sqlite3* db, Release release) : Reader(db), release_(std::move(release)) {}

Snapshot::Snapshot(Snapshot&& other) noexcept
    : Reader(std::exchange(other.db_, nullptr)), release_(std::move(other.release_)) {}

Snapshot::~Snapshot() {
    if (db_ && release_) release_(db_);
}

// =============================================================================
// Transaction
// =============================================================================

void Transaction::put(const PractitionerAccount& account) {
    require_valid(validate_entity(account));
    sql::Statement stmt(db_,
                        "INSERT INTO accounts(id, license_key, name_key, role, active, body) "
                        "VALUES(?1, ?2, ?3, ?4, ?5, ?6) ON CONFLICT(id) DO UPDATE SET "
                        "license_key = excluded.license_key, name_key = excluded.name_key, "
                        "role = excluded.role, active = excluded.active, body = excluded.body");
    stmt.bind(1, account.id)
        .bind(2, name_key(account.license_number))
        .bind(3, name_key(account.full_name))
        .bind(4, to_string(account.role))
        .bind(5, std::int64_t{account.active})
        .bind(6, json(account).dump());
    stmt.run();
}

void Transaction::put(const Patient& patient) {
    sql::Statement stmt(db_,
                        "INSERT INTO patients(id, name_key, active, body) VALUES(?1, ?2, ?3, ?4) "
                        "ON CONFLICT(id) DO UPDATE SET name_key = excluded.name_key, "
                        "active = excluded.active, body = excluded.body");
    stmt.bind(1, patient.id)
        .bind(2, name_key(patient.full_name))
        .bind(3, std::int64_t{patient.active})
        .bind(4, json(patient).dump());
    stmt.run();
}

void Transaction::put(const Disease& disease) {
    require_valid(validate_entity(disease));
    sql::Statement stmt(db_,
                        "INSERT INTO diseases(id, name_key, body) VALUES(?1, ?2, ?3) "
                        "ON CONFLICT(id) DO UPDATE SET name_key = excluded.name_key, "
                        "body = excluded.body");
    stmt.bind(1, disease.id).bind(2, name_key(disease.name)).bind(3, json(disease).dump());
    stmt.run();
}

void Transaction::put(const Drug& drug) {
    require_valid(validate_entity(drug));
    sql::Statement stmt(db_,
                        "INSERT INTO drugs(id, name_key, active, body) VALUES(?1, ?2, ?3, ?4) "
                        "ON CONFLICT(id) DO UPDATE SET name_key = excluded.name_key, "
                        "active = excluded.active, body = excluded.body");
    stmt.bind(1, drug.id)
        .bind(2, name_key(drug.name))
        .bind(3, std::int64_t{drug.active})
        .bind(4, json(drug).dump());
    stmt.run();
}

void Transaction::put(const InteractionRule& rule) {
    require_valid(validate_entity(rule));
    sql::Statement stmt(db_,
                        "INSERT INTO interactions(pair_key, drug_a, drug_b, body) "
                        "VALUES(?1, ?2, ?3, ?4) ON CONFLICT(pair_key) DO UPDATE SET "
                        "body = excluded.body");
    stmt.bind(1, rule.drug_pair.key())
        .bind(2, rule.drug_pair.first())
        .bind(3, rule.drug_pair.second())
        .bind(4, json(rule).dump());
    stmt.run();
}

void Transaction::put(const Prescription& rx) {
    require_valid(validate_entity(rx));
    sql::Statement stmt(
        db_,
        "INSERT INTO prescriptions(id, status, patient_id, prescriber_id, pharmacist_id, "
        "sent_at, body) VALUES(?1, ?2, ?3, ?4, ?5, ?6, ?7) ON CONFLICT(id) DO UPDATE SET "
        "status = excluded.status, patient_id = excluded.patient_id, "
        "prescriber_id = excluded.prescriber_id, pharmacist_id = excluded.pharmacist_id, "
        "sent_at = excluded.sent_at, body = excluded.body");
    stmt.bind(1, rx.id).bind(2, to_string(rx.status)).bind(3, rx.patient_id).bind(4, rx.prescriber_id);
    if (rx.pharmacist_id) {
        stmt.bind(5, *rx.pharmacist_id);
    } else {
        stmt.bind_null(5);
    }
    stmt.bind(6, millis(rx.sent_at)).bind(7, json(rx).dump());
    stmt.run();
}

void Transaction::remove_disease(const Id& id) {
    sql::Statement stmt(db_, "DELETE FROM diseases WHERE id = ?");
    stmt.bind(1, id).run();
    if (sqlite3_changes(db_) == 0) not_found("disease", id);
}

void Transaction::remove_rule(const DrugPair& pair) {
    sql::Statement stmt(db_, "DELETE FROM interactions WHERE pair_key = ?");
    stmt.bind(1, pair.key()).run();
    if (sqlite3_changes(db_) == 0) not_found("interaction rule", pair.key());
}

AuditEntry Transaction::append_audit(const AuditDraft& draft) {
    // INTEGER PRIMARY KEY assigns max(seq)+1; rolled-back inserts never leave gaps.
    sql::Statement stmt(db_,
                        "INSERT INTO audit(seq, at, actor, action, entity_kind, entity_id, detail) "
                        "VALUES(NULL, ?1, ?2, ?3, ?4, ?5, ?6)");
    stmt.bind(1, millis(draft.at))
        .bind(2, draft.actor_id)
        .bind(3, draft.action)
        .bind(4, draft.entity_kind)
        .bind(5, draft.entity_id)
        .bind(6, draft.detail.dump());
    stmt.run();
    AuditEntry entry{static_cast<std::uint64_t>(sqlite3_last_insert_rowid(db_)),
                     draft.at,
                     draft.actor_id,
                     draft.action,
                     draft.entity_kind,
                     draft.entity_id,
                     draft.detail};
    return entry;
}

// =============================================================================
// Store
// =============================================================================

struct Store::Impl {
    std::filesystem::path directory;
    std::filesystem::path db_file;
    StoreOptions options;
    int lock_fd = -1;

    std::mutex write_mutex;
    sqlite3* writer = nullptr;

    std::mutex pool_mutex;
    std::vector<sqlite3*> idle_readers;

    ~Impl() {
        for (auto* db : idle_readers) sqlite3_close(db);
        if (writer) sqlite3_close(writer);
        if (lock_fd >= 0) ::close(lock_fd);  // releases the flock
    }

    sqlite3* acquire_reader() {
        {
            std::lock_guard lock(pool_mutex);
            if (!idle_readers.empty()) {
                auto* db = idle_readers.back();
                idle_readers.pop_back();
                return db;
            }
        }
        return open_connection(db_file, options.full_sync);
    }

    void release_reader(sqlite3* db) {
        if (sqlite3_get_autocommit(db) == 0) {
            sqlite3_exec(db, "COMMIT", nullptr, nullptr, nullptr);
        }
        std::lock_guard lock(pool_mutex);
        idle_readers.push_back(db);
    }
};

Store::Store(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Store::Store(Store&&) noexcept = default;
Store& Store::operator=(Store&&) noexcept = default;
Store::~Store() = default;

Store Store::open(const std::filesystem::path& directory, StoreOptions options) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw Error(ErrorCode::store_unavailable,
                    "cannot create store directory " + directory.string() + ": " + ec.message());
    }
    auto impl = std::make_unique<Impl>();
    impl->directory = directory;
    impl->db_file = directory / "rxtropic.db";
    impl->options = options;

    const auto lock_path = directory / "LOCK";
    impl->lock_fd = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (impl->lock_fd < 0) {
        throw Error(ErrorCode::store_unavailable, "cannot open lock file " + lock_path.string());
    }
    if (::flock(impl->lock_fd, LOCK_EX | LOCK_NB) != 0) {
        throw Error(ErrorCode::store_unavailable,
                    "store " + directory.string() + " is in use by another process");
    }

    impl->writer = open_connection(impl->db_file, options.full_sync);
    sql::exec(impl->writer, schema_sql);
    return Store(std::move(impl));
}

const std::filesystem::path& Store::directory() const noexcept { return impl_->directory; }

Snapshot Store::snapshot() const {
    auto* db = impl_->acquire_reader();
    try {
        sql::exec(db, "BEGIN");
        // The first read pins the WAL snapshot for the rest of the transaction.
        sql::Statement pin(db, "SELECT count(*) FROM sqlite_master");
        pin.step();
    } catch (...) {
        impl_->release_reader(db);
        throw;
    }
    Impl* impl = impl_.get();
    return Snapshot(db, [impl](sqlite3* conn) { impl->release_reader(conn); });
}

void Store::run_write(const std::function<void(Transaction&)>& fn) {
    std::lock_guard lock(impl_->write_mutex);
    sql::exec(impl_->writer, "BEGIN IMMEDIATE");
    try {
        Transaction txn(impl_->writer);
        fn(txn);
        sql::exec(impl_->writer, "COMMIT");
    } catch (...) {
        if (sqlite3_get_autocommit(impl_->writer) == 0) {
            sqlite3_exec(impl_->writer, "ROLLBACK", nullptr, nullptr, nullptr);
        }
        throw;
    }
}

Prescription Store::transition(const Id& id, PrescriptionStatus expected, PrescriptionStatus next,
                               const Mutator& mutate, const AuditDraft& audit) {
    if (!is_legal_transition(expected, next)) {
        throw Error(ErrorCode::wrong_state, "illegal transition " +
                                                std::string(to_string(expected)) + " -> " +
                                                std::string(to_string(next)));
    }
    return write([&](Transaction& txn) {
        auto rx = txn.find_prescription(id);
        if (!rx) not_found("prescription", id);
        if (rx->status != expected) {
            throw Error(ErrorCode::conflict, "prescription " + id + " is " +
                                                 std::string(to_string(rx->status)) +
                                                 ", expected " + std::string(to_string(expected)));
        }
        AuditDraft entry = audit;
        entry.entity_kind = "prescription";
        entry.entity_id = id;
        if (!entry.detail.is_object()) entry.detail = json::object();
        if (mutate) mutate(*rx, txn, entry.detail);
        rx->status = next;
        txn.put(*rx);

        entry.detail["from"] = to_string(expected);
        entry.detail["to"] = to_string(next);
        txn.append_audit(entry);
        return *rx;
    });
}

AuditEntry Store::audit_append(const AuditDraft& draft) {
    return write([&](Transaction& txn) { return txn.append_audit(draft); });
}

std::vector<AuditEntry> Store::audit_scan(const std::optional<std::string>& entity_id) const {
    return snapshot().audit_scan(entity_id);
}

}  // namespace rxtropic::store
