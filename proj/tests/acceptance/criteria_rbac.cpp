/**
 * @file criteria_rbac.cpp
 * @brief Every role x permission x token-kind cell, checked at the
 *        authorizer and over HTTP
 */

#include "criteria.hpp"

#include "served.hpp"

#include "rxtropic/domain/error.hpp"

#include <sstream>

namespace rxtropic::acceptance {

using namespace testing;
using auth::Permission;

namespace {

/// The role-permission matrix, written out independently of the library.
bool matrix(Role role, Permission p) {
    using P = Permission;
    switch (role) {
        case Role::administrator:
            return p == P::manage_users || p == P::manage_drugs || p == P::manage_diseases ||
                   p == P::manage_patients || p == P::manage_interactions ||
                   p == P::view_patient_record || p == P::view_drug_detail;
        case Role::doctor:
            return p == P::view_patient_record || p == P::view_drug_detail || p == P::compose_rx ||
                   p == P::send_rx || p == P::cancel_rx || p == P::manage_drugs;
        case Role::pharmacist:
            return p == P::list_pending || p == P::acknowledge_rx || p == P::dispense_rx ||
                   p == P::print_rx || p == P::view_drug_detail || p == P::view_patient_record;
    }
    return false;
}

struct Route {
    std::string method;
    std::string path;
};

/// Routes gated on exactly one permission. Requests carry ids that do not
/// exist or bodies that fail validation, so permitted calls change nothing.
std::vector<std::pair<Route, Permission>> gated_routes(const std::string& drug_id) {
    using P = Permission;
    return {
        {{"GET", "/v1/admin/practitioners"}, P::manage_users},
        {{"POST", "/v1/admin/practitioners"}, P::manage_users},
        {{"GET", "/v1/admin/practitioners/none"}, P::manage_users},
        {{"PUT", "/v1/admin/practitioners/none"}, P::manage_users},
        {{"DELETE", "/v1/admin/practitioners/none"}, P::manage_users},
        {{"GET", "/v1/admin/patients"}, P::manage_patients},
        {{"POST", "/v1/admin/patients"}, P::manage_patients},
        {{"GET", "/v1/admin/patients/none"}, P::manage_patients},
        {{"PUT", "/v1/admin/patients/none"}, P::manage_patients},
        {{"DELETE", "/v1/admin/patients/none"}, P::manage_patients},
        {{"GET", "/v1/admin/drugs"}, P::manage_drugs},
        {{"POST", "/v1/admin/drugs"}, P::manage_drugs},
        {{"GET", "/v1/admin/drugs/none"}, P::manage_drugs},
        {{"PUT", "/v1/admin/drugs/none"}, P::manage_drugs},
        {{"DELETE", "/v1/admin/drugs/none"}, P::manage_drugs},
        {{"GET", "/v1/admin/diseases"}, P::manage_diseases},
        {{"POST", "/v1/admin/diseases"}, P::manage_diseases},
        {{"GET", "/v1/admin/diseases/none"}, P::manage_diseases},
        {{"PUT", "/v1/admin/diseases/none"}, P::manage_diseases},
        {{"DELETE", "/v1/admin/diseases/none"}, P::manage_diseases},
        {{"GET", "/v1/admin/interactions"}, P::manage_interactions},
        {{"POST", "/v1/admin/interactions"}, P::manage_interactions},
        {{"GET", "/v1/admin/interactions/none/other"}, P::manage_interactions},
        {{"PUT", "/v1/admin/interactions/none/other"}, P::manage_interactions},
        {{"DELETE", "/v1/admin/interactions/none/other"}, P::manage_interactions},
        {{"GET", "/v1/patients?q=a"}, P::view_patient_record},
        {{"GET", "/v1/patients/none/record"}, P::view_patient_record},
        {{"GET", "/v1/prescriptions/none"}, P::view_patient_record},
        {{"GET", "/v1/drugs?q=a"}, P::view_drug_detail},
        {{"GET", "/v1/drugs/" + drug_id}, P::view_drug_detail},
        {{"GET", "/v1/diseases"}, P::view_drug_detail},
        {{"GET", "/v1/diseases/none/suggested-drugs"}, P::view_drug_detail},
        {{"POST", "/v1/prescriptions"}, P::compose_rx},
        {{"GET", "/v1/prescriptions/none/findings"}, P::compose_rx},
        {{"PUT", "/v1/prescriptions/none"}, P::compose_rx},
        {{"POST", "/v1/prescriptions/none/send"}, P::send_rx},
        {{"POST", "/v1/prescriptions/none/cancel"}, P::cancel_rx},
        {{"GET", "/v1/pharmacy/pending"}, P::list_pending},
        {{"POST", "/v1/prescriptions/none/acknowledge"}, P::acknowledge_rx},
        {{"POST", "/v1/prescriptions/none/dispense"}, P::dispense_rx},
        {{"GET", "/v1/prescriptions/none/print"}, P::print_rx},
    };
}

ApiResponse call(ApiClient& client, const Route& route) {
    if (route.method == "GET") return client.get(route.path);
    if (route.method == "POST") return client.post(route.path, nlohmann::json::object());
    if (route.method == "PUT") return client.put(route.path, nlohmann::json::object());
    return client.del(route.path);
}

/// Denied means exactly FORBIDDEN for a live token and UNAUTHENTICATED without one.
std::string judge(const ApiResponse& r, bool with_token, bool allowed) {
    const auto code = r.body.is_object() && r.body.contains("code") ? r.body["code"].get<std::string>() : "";
    if (!with_token) {
        return r.status == 401 && code == "UNAUTHENTICATED" ? "" : "expected 401, got " + std::to_string(r.status);
    }
    if (allowed) {
        if (r.status == 401 || r.status == 403 || r.status >= 500) {
            return "expected access, got " + std::to_string(r.status) + " " + code;
        }
        return "";
    }
    return r.status == 403 && code == "FORBIDDEN" ? "" : "expected 403, got " + std::to_string(r.status);
}

}  // namespace

Outcome rbac_matrix() {
    World world;
    Served served(*world.app);
    const std::map<Role, auth::Actor> actor_of = {{Role::administrator, world.admin},
                                                   {Role::doctor, world.doctor},
                                                   {Role::pharmacist, world.pharmacist}};
    std::map<Role, std::string> token_of;
    for (const auto& [role, actor] : actor_of) token_of[role] = world.login(actor);

    const auto routes = gated_routes(world.drug("Quinine"));
    std::vector<std::string> deviations;
    std::size_t cells = 0;

    for (const auto role : all_roles) {
        const auto wrong_role = all_roles[(static_cast<std::size_t>(role) + 1) % std::size(all_roles)];
        for (const auto p : auth::all_permissions) {
            // (no token, wrong-role token, right-role token)
            const std::vector<std::pair<std::string, std::optional<Role>>> kinds = {
                {"no-token", std::nullopt}, {"wrong-role", wrong_role}, {"right-role", role}};
            for (const auto& [kind, holder] : kinds) {
                ++cells;
                const bool allowed = holder && matrix(*holder, p);
                std::ostringstream where;
                where << to_string(role) << "/" << to_string(p) << "/" << kind;

                // Authorizer.
                bool auth_ok = false;
                try {
                    world.sessions().authorize(holder ? token_of[*holder] : "", p);
                    auth_ok = allowed;
                } catch (const Error& e) {
                    auth_ok = !allowed && e.code() == (holder ? ErrorCode::forbidden : ErrorCode::unauthenticated);
                }
                if (!auth_ok) deviations.push_back(where.str() + " authorize");

                // Every HTTP route gated on this permission.
                for (const auto& [route, gate] : routes) {
                    if (gate != p) continue;
                    ApiClient client(served.port());
                    if (holder) client.token = token_of[*holder];
                    const auto verdict = judge(call(client, route), holder.has_value(), allowed);
                    if (!verdict.empty()) {
                        deviations.push_back(where.str() + " " + route.method + " " + route.path + ": " + verdict);
                    }
                }
            }
        }
    }

    // Routes outside the permission table: audit is administrator-only,
    // session routes need any live token.
    for (const auto& [role, token] : token_of) {
        ApiClient client(served.port());
        client.token = token;
        const auto verdict = judge(client.get("/v1/audit"), true, role == Role::administrator);
        if (!verdict.empty()) deviations.push_back(std::string(to_string(role)) + " GET /v1/audit: " + verdict);
    }
    ApiClient anonymous(served.port());
    for (const Route& r : {Route{"GET", "/v1/audit"}, Route{"POST", "/v1/logout"}, Route{"POST", "/v1/password"}}) {
        const auto verdict = judge(call(anonymous, r), false, false);
        if (!verdict.empty()) deviations.push_back("no-token " + r.method + " " + r.path + ": " + verdict);
    }

    // Nothing in the sweep may have changed clinical state.
    if (!world.store().snapshot().list_prescriptions().empty()) deviations.push_back("sweep created a prescription");

    std::string detail = std::to_string(cells) + " cells, " + std::to_string(routes.size()) + " gated routes, " +
                         std::to_string(deviations.size()) + " deviations";
    if (!deviations.empty()) detail += "; first: " + deviations.front();
    return {cells == 126 && deviations.empty(), detail};
}

}  // namespace rxtropic::acceptance
