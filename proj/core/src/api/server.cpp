#include "rxtropic/api/server.hpp"

#include "rxtropic/api/http_errors.hpp"
#include "rxtropic/domain/json.hpp"

#include <httplib.h>

#include <charconv>
#include <functional>
#include <stdexcept>

namespace rxtropic::api {

using auth::Actor;
using auth::Permission;
using nlohmann::json;

namespace {

constexpr const char* json_type = "application/json";

/// Who may call a route once a session is established.
struct Gate {
    enum class Kind { any_session, permission, administrator } kind;
    Permission permission = Permission::manage_users;
};

Gate needs(Permission p) { return {Gate::Kind::permission, p}; }
const Gate any_session{Gate::Kind::any_session};
const Gate administrator_only{Gate::Kind::administrator};

using Handler = std::function<void(const httplib::Request&, httplib::Response&, const Actor&)>;

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    // Error messages may echo client bytes that are not valid UTF-8.
    res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), json_type);
}

void send_error(httplib::Response& res, const Error& error) {
    send_json(res, error_body(error), http_status(error.code()));
}

std::optional<std::string> bearer_token(const httplib::Request& req) {
    const auto header = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) {
        return std::nullopt;
    }
    return header.substr(prefix.size());
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    auto body = json::parse(req.body);
    if (!body.is_object()) throw Error(ErrorCode::validation, "request body must be a JSON object");
    return body;
}

const json& required(const json& body, const char* name) {
    auto it = body.find(name);
    if (it == body.end() || it->is_null()) {
        throw Error(ErrorCode::validation, std::string("field '") + name + "' must be present");
    }
    return *it;
}

std::string required_string(const json& body, const char* name) {
    const auto& v = required(body, name);
    if (!v.is_string()) {
        throw Error(ErrorCode::validation, std::string("field '") + name + "' must be a string");
    }
    return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& body, const char* name) {
    auto it = body.find(name);
    if (it == body.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        throw Error(ErrorCode::validation, std::string("field '") + name + "' must be a string");
    }
    return it->get<std::string>();
}

std::vector<PrescriptionItem> items_of(const json& body) {
    const auto& items = required(body, "items");
    if (!items.is_array()) throw Error(ErrorCode::validation, "field 'items' must be an array");
    std::vector<PrescriptionItem> out;
    for (const auto& item : items) out.push_back(item.get<PrescriptionItem>());
    return out;
}

std::size_t query_number(const httplib::Request& req, const char* name, std::size_t fallback) {
    if (!req.has_param(name)) return fallback;
    const auto text = req.get_param_value(name);
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw Error(ErrorCode::validation,
                    std::string("query parameter '") + name + "' must be a nonnegative integer");
    }
    return value;
}

/// Applies the optional limit/offset pair to a list response.
template <typename T, typename Convert>
json page(const httplib::Request& req, const std::vector<T>& records, Convert convert) {
    const auto offset = query_number(req, "offset", 0);
    const auto limit = query_number(req, "limit", records.size());
    json out = json::array();
    for (std::size_t i = offset; i < records.size() && i - offset < limit; ++i) {
        out.push_back(convert(records[i]));
    }
    return out;
}

template <typename T>
json page(const httplib::Request& req, const std::vector<T>& records) {
    return page(req, records, [](const T& r) { return json(r); });
}

json summary_json(const workflow::PrescriptionSummary& s) {
    return {{"id", s.id},
            {"status", to_string(s.status)},
            {"patient_id", s.patient_id},
            {"patient_name", s.patient_name},
            {"prescriber_id", s.prescriber_id},
            {"prescriber_name", s.prescriber_name},
            {"diagnosis_name", s.diagnosis_name},
            {"item_count", s.item_count},
            {"sent_at", s.sent_at ? json(format_timestamp(*s.sent_at)) : json(nullptr)},
            {"pharmacist_id", s.pharmacist_id ? json(*s.pharmacist_id) : json(nullptr)}};
}

std::optional<bool> query_flag(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) return std::nullopt;
    const auto text = req.get_param_value(name);
    if (text == "true") return true;
    if (text == "false") return false;
    throw Error(ErrorCode::validation,
                std::string("query parameter '") + name + "' must be true or false");
}

}  // namespace

struct ApiServer::Impl {
    Impl(Application& app, ServerConfig config) : app(app), config(std::move(config)) {
        routes();
    }

    Application& app;
    ServerConfig config;
    httplib::Server server;
    int bound_port = -1;

    auth::Authenticator& sessions() { return app.sessions(); }
    admin::RegistryService& registry() { return app.registry(); }
    workflow::PrescriptionService& rx() { return app.prescriptions(); }

    /// Wraps a handler with authentication, the route gate and error mapping.
    httplib::Server::Handler guarded(Gate gate, Handler handler) {
        return [this, gate, handler = std::move(handler)](const httplib::Request& req,
                                                          httplib::Response& res) {
            run(res, [&] {
                auto token = bearer_token(req);
                if (!token) throw Error(ErrorCode::unauthenticated, "missing bearer token");
                Actor actor = gate.kind == Gate::Kind::permission
                                  ? sessions().authorize(*token, gate.permission)
                                  : sessions().authenticate(*token);
                if (gate.kind == Gate::Kind::administrator && actor.role != Role::administrator) {
                    throw Error(ErrorCode::forbidden, "administrator role required");
                }
                handler(req, res, actor);
            });
        };
    }

    template <typename Fn>
    static void run(httplib::Response& res, Fn&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const json::exception& e) {
            send_error(res, Error(ErrorCode::validation, std::string("malformed JSON: ") + e.what()));
        } catch (const std::exception& e) {
            send_error(res, Error(ErrorCode::internal, e.what()));
        }
    }

    void get(const std::string& pattern, Gate gate, Handler h) {
        server.Get(pattern, guarded(gate, std::move(h)));
    }
    void post(const std::string& pattern, Gate gate, Handler h) {
        server.Post(pattern, guarded(gate, std::move(h)));
    }
    void put(const std::string& pattern, Gate gate, Handler h) {
        server.Put(pattern, guarded(gate, std::move(h)));
    }
    void del(const std::string& pattern, Gate gate, Handler h) {
        server.Delete(pattern, guarded(gate, std::move(h)));
    }

    void routes() {
        // httplib defaults to SO_REUSEPORT, which would let a second server
        // share a busy port instead of failing.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
        });

        server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
            send_json(res, {{"status", "ok"}});
        });

        session_routes();
        practitioner_routes();
        patient_routes();
        drug_routes();
        disease_routes();
        interaction_routes();
        lookup_routes();
        prescription_routes();

        get("/v1/audit", administrator_only, [this](const auto& req, auto& res, const Actor& a) {
            std::optional<std::string> entity;
            if (req.has_param("entity")) entity = req.get_param_value("entity");
            send_json(res, page(req, registry().audit(a, entity),
                                [](const store::AuditEntry& e) { return store::to_json(e); }));
        });

        if (config.static_dir) server.set_mount_point("/", config.static_dir->string());

        server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
            if (!res.body.empty()) return;
            if (res.status == 404) {
                send_error(res, Error(ErrorCode::not_found, "no route for " + req.method + " " + req.path));
                res.status = 404;
            }
        });
        server.set_exception_handler(
            [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
                try {
                    std::rethrow_exception(ep);
                } catch (const std::exception& e) {
                    send_error(res, Error(ErrorCode::internal, e.what()));
                } catch (...) {
                    send_error(res, Error(ErrorCode::internal, "unknown failure"));
                }
            });
    }

    void session_routes() {
        server.Post("/v1/login", [this](const httplib::Request& req, httplib::Response& res) {
            run(res, [&] {
                const auto body = parse_body(req);
                const auto session = sessions().login(required_string(body, "license_number"),
                                                      required_string(body, "password"));
                send_json(res, {{"token", session.token},
                                {"role", to_string(session.role)},
                                {"account_id", session.account_id},
                                {"expires_at", format_timestamp(session.expires_at)}});
            });
        });

        post("/v1/logout", any_session, [this](const auto& req, auto& res, const Actor&) {
            sessions().logout(*bearer_token(req));
            send_json(res, {{"status", "ok"}});
        });

        post("/v1/password", any_session, [this](const auto& req, auto& res, const Actor&) {
            const auto body = parse_body(req);
            sessions().change_password(*bearer_token(req), required_string(body, "old_password"),
                                       required_string(body, "new_password"));
            send_json(res, {{"status", "ok"}});
        });
    }

    void practitioner_routes() {
        const auto gate = needs(Permission::manage_users);
        const auto view = [](const PractitionerAccount& a) { return public_view(a); };

        get("/v1/admin/practitioners", gate, [this, view](const auto& req, auto& res, const Actor& a) {
            store::AccountFilter filter;
            if (req.has_param("role")) {
                filter.role = parse_role(req.get_param_value("role"));
                if (!filter.role) throw Error(ErrorCode::validation, "unknown role");
            }
            filter.active = query_flag(req, "active");
            send_json(res, page(req, registry().list_practitioners(a, filter), view));
        });

        post("/v1/admin/practitioners", gate, [this](const auto& req, auto& res, const Actor& a) {
            const auto body = parse_body(req);
            admin::NewPractitioner spec;
            spec.full_name = required_string(body, "full_name");
            auto role = parse_role(required_string(body, "role"));
            if (!role) throw Error(ErrorCode::validation, "field 'role' must be a known role");
            spec.role = *role;
            spec.license_number = required_string(body, "license_number");
            spec.password = required_string(body, "password");
            send_json(res, public_view(registry().create_practitioner(a, spec)), 201);
        });

        get("/v1/admin/practitioners/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, public_view(registry().get_practitioner(a, req.path_params.at("id"))));
        });

        put("/v1/admin/practitioners/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            const auto body = parse_body(req);
            admin::PractitionerUpdate update;
            update.full_name = optional_string(body, "full_name");
            if (auto role = optional_string(body, "role")) {
                update.role = parse_role(*role);
                if (!update.role) throw Error(ErrorCode::validation, "field 'role' must be a known role");
            }
            update.license_number = optional_string(body, "license_number");
            update.password = optional_string(body, "password");
            if (auto it = body.find("active"); it != body.end() && !it->is_null()) {
                if (!it->is_boolean()) throw Error(ErrorCode::validation, "field 'active' must be a boolean");
                update.active = it->template get<bool>();
            }
            send_json(res, public_view(registry().update_practitioner(a, req.path_params.at("id"), update)));
        });

        del("/v1/admin/practitioners/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, public_view(registry().deactivate_practitioner(a, req.path_params.at("id"))));
        });
    }

    void patient_routes() {
        const auto gate = needs(Permission::manage_patients);

        get("/v1/admin/patients", gate, [this](const auto& req, auto& res, const Actor& a) {
            store::PatientFilter filter;
            if (req.has_param("q")) filter.name_contains = req.get_param_value("q");
            filter.active = query_flag(req, "active");
            send_json(res, page(req, registry().list_patients(a, filter)));
        });
        post("/v1/admin/patients", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().create_patient(a, parse_body(req).template get<Patient>()), 201);
        });
        get("/v1/admin/patients/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().get_patient(a, req.path_params.at("id")));
        });
        put("/v1/admin/patients/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            auto patient = parse_body(req).template get<Patient>();
            patient.id = req.path_params.at("id");
            send_json(res, registry().update_patient(a, patient));
        });
        del("/v1/admin/patients/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().deactivate_patient(a, req.path_params.at("id")));
        });
    }

    void drug_routes() {
        const auto gate = needs(Permission::manage_drugs);

        get("/v1/admin/drugs", gate, [this](const auto& req, auto& res, const Actor& a) {
            store::DrugFilter filter;
            if (req.has_param("q")) filter.name_contains = req.get_param_value("q");
            filter.active = query_flag(req, "active");
            send_json(res, page(req, registry().list_drugs(a, filter)));
        });
        post("/v1/admin/drugs", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().create_drug(a, parse_body(req).template get<Drug>()), 201);
        });
        get("/v1/admin/drugs/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().get_drug(a, req.path_params.at("id")));
        });
        put("/v1/admin/drugs/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            auto drug = parse_body(req).template get<Drug>();
            drug.id = req.path_params.at("id");
            send_json(res, registry().update_drug(a, drug));
        });
        del("/v1/admin/drugs/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().deactivate_drug(a, req.path_params.at("id")));
        });
    }

    void disease_routes() {
        const auto gate = needs(Permission::manage_diseases);

        get("/v1/admin/diseases", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, page(req, registry().list_diseases(a)));
        });
        post("/v1/admin/diseases", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().create_disease(a, parse_body(req).template get<Disease>()), 201);
        });
        get("/v1/admin/diseases/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().get_disease(a, req.path_params.at("id")));
        });
        put("/v1/admin/diseases/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            auto disease = parse_body(req).template get<Disease>();
            disease.id = req.path_params.at("id");
            send_json(res, registry().update_disease(a, disease));
        });
        del("/v1/admin/diseases/:id", gate, [this](const auto& req, auto& res, const Actor& a) {
            registry().remove_disease(a, req.path_params.at("id"));
            send_json(res, {{"status", "removed"}});
        });
    }

    void interaction_routes() {
        const auto gate = needs(Permission::manage_interactions);
        const auto pair_of = [](const httplib::Request& req) {
            return DrugPair(req.path_params.at("a"), req.path_params.at("b"));
        };

        get("/v1/admin/interactions", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, page(req, registry().list_rules(a)));
        });
        post("/v1/admin/interactions", gate, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().create_rule(a, parse_body(req).template get<InteractionRule>()), 201);
        });
        get("/v1/admin/interactions/:a/:b", gate, [this, pair_of](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().get_rule(a, pair_of(req)));
        });
        put("/v1/admin/interactions/:a/:b", gate, [this, pair_of](const auto& req, auto& res, const Actor& a) {
            const auto body = parse_body(req);
            InteractionRule rule;
            rule.drug_pair = pair_of(req);
            auto severity = parse_interaction_severity(required_string(body, "severity"));
            if (!severity) throw Error(ErrorCode::validation, "field 'severity' must be MAJOR, MODERATE or MINOR");
            rule.severity = *severity;
            rule.note = optional_string(body, "note").value_or("");
            send_json(res, registry().update_rule(a, rule));
        });
        del("/v1/admin/interactions/:a/:b", gate, [this, pair_of](const auto& req, auto& res, const Actor& a) {
            registry().remove_rule(a, pair_of(req));
            send_json(res, {{"status", "removed"}});
        });
    }

    void lookup_routes() {
        const auto records = needs(Permission::view_patient_record);
        const auto formulary = needs(Permission::view_drug_detail);

        get("/v1/patients", records, [this](const auto& req, auto& res, const Actor& a) {
            const auto q = req.has_param("q") ? req.get_param_value("q") : std::string{};
            send_json(res, page(req, registry().search_patients(a, q)));
        });
        get("/v1/patients/:id/record", records, [this](const auto& req, auto& res, const Actor& a) {
            const auto record = registry().patient_record(a, req.path_params.at("id"));
            send_json(res, {{"patient", record.patient}, {"prescriptions", record.prescriptions}});
        });
        get("/v1/drugs", formulary, [this](const auto& req, auto& res, const Actor& a) {
            const auto q = req.has_param("q") ? req.get_param_value("q") : std::string{};
            send_json(res, page(req, registry().search_drugs(a, q)));
        });
        get("/v1/drugs/:id", formulary, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, registry().drug_detail(a, req.path_params.at("id")));
        });
        get("/v1/diseases", formulary, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, page(req, registry().browse_diseases(a)));
        });
        get("/v1/diseases/:id/suggested-drugs", formulary, [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, page(req, registry().suggested_drugs(a, req.path_params.at("id"))));
        });
    }

    void prescription_routes() {
        post("/v1/prescriptions", needs(Permission::compose_rx), [this](const auto& req, auto& res, const Actor& a) {
            const auto body = parse_body(req);
            send_json(res,
                      rx().compose(a, required_string(body, "patient_id"),
                                   required_string(body, "diagnosis"), items_of(body)),
                      201);
        });
        get("/v1/prescriptions/:id", needs(Permission::view_patient_record),
            [this](const auto& req, auto& res, const Actor& a) {
                send_json(res, rx().get(a, req.path_params.at("id")));
            });
        get("/v1/prescriptions/:id/findings", needs(Permission::compose_rx),
            [this](const auto& req, auto& res, const Actor& a) {
                send_json(res, {{"findings", rx().preview_findings(a, req.path_params.at("id"))}});
            });
        put("/v1/prescriptions/:id", needs(Permission::compose_rx), [this](const auto& req, auto& res, const Actor& a) {
            const auto body = parse_body(req);
            send_json(res, rx().edit_draft(a, req.path_params.at("id"), items_of(body),
                                           required_string(body, "diagnosis")));
        });
        post("/v1/prescriptions/:id/send", needs(Permission::send_rx),
             [this](const auto& req, auto& res, const Actor& a) {
                 const auto body = parse_body(req);
                 std::vector<workflow::OverrideRequest> overrides;
                 if (auto it = body.find("overrides"); it != body.end() && !it->is_null()) {
                     if (!it->is_array()) throw Error(ErrorCode::validation, "field 'overrides' must be an array");
                     for (const auto& o : *it) {
                         auto kind = parse_finding_kind(required_string(o, "finding_kind"));
                         if (!kind) throw Error(ErrorCode::validation, "field 'finding_kind' must be a finding kind");
                         overrides.push_back({*kind, optional_string(o, "reason").value_or("")});
                     }
                 }
                 send_json(res, rx().send(a, req.path_params.at("id"), overrides));
             });
        post("/v1/prescriptions/:id/cancel", needs(Permission::cancel_rx),
             [this](const auto& req, auto& res, const Actor& a) {
                 const auto body = parse_body(req);
                 send_json(res, rx().cancel(a, req.path_params.at("id"),
                                            optional_string(body, "reason").value_or("")));
             });
        get("/v1/pharmacy/pending", needs(Permission::list_pending), [this](const auto& req, auto& res, const Actor& a) {
            send_json(res, page(req, rx().list_pending(a), summary_json));
        });
        post("/v1/prescriptions/:id/acknowledge", needs(Permission::acknowledge_rx),
             [this](const auto& req, auto& res, const Actor& a) {
                 send_json(res, rx().acknowledge(a, req.path_params.at("id")));
             });
        post("/v1/prescriptions/:id/dispense", needs(Permission::dispense_rx),
             [this](const auto& req, auto& res, const Actor& a) {
                 send_json(res, rx().dispense(a, req.path_params.at("id")));
             });
        get("/v1/prescriptions/:id/print", needs(Permission::print_rx),
            [this](const auto& req, auto& res, const Actor& a) {
                res.status = 200;
                res.set_content(rx().print_copy(a, req.path_params.at("id")), "text/plain; charset=utf-8");
            });
    }
};

ApiServer::ApiServer(Application& app, ServerConfig config)
    : impl_(std::make_unique<Impl>(app, std::move(config))) {}

ApiServer::~ApiServer() {
    stop();
}

int ApiServer::bind() {
    auto& impl = *impl_;
    if (impl.config.port == 0) {
        impl.bound_port = impl.server.bind_to_any_port(impl.config.host);
    } else if (impl.server.bind_to_port(impl.config.host, impl.config.port)) {
        impl.bound_port = impl.config.port;
    } else {
        impl.bound_port = -1;
    }
    if (impl.bound_port < 0) {
        throw std::runtime_error("cannot bind " + impl.config.host + ":" +
                                 std::to_string(impl.config.port));
    }
    return impl.bound_port;
}

void ApiServer::listen() {
    impl_->server.listen_after_bind();
}

void ApiServer::stop() {
    if (impl_) impl_->server.stop();
}

bool ApiServer::running() const {
    return impl_->server.is_running();
}

int ApiServer::port() const noexcept {
    return impl_->bound_port;
}

}  // namespace rxtropic::api
