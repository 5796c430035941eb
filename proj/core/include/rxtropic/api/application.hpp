/**
 * @file application.hpp
 * @brief Composition root wiring the store, sessions and services
 */

#pragma once

#include "rxtropic/admin/registry.hpp"
#include "rxtropic/auth/authenticator.hpp"
#include "rxtropic/auth/password.hpp"
#include "rxtropic/domain/time.hpp"
#include "rxtropic/store/store.hpp"
#include "rxtropic/workflow/prescriptions.hpp"

#include <filesystem>

namespace rxtropic::api {

struct ApplicationConfig {
    std::filesystem::path store_dir;
    store::StoreOptions store_options;
    auth::AuthConfig auth;
    workflow::WorkflowConfig workflow;
    auth::HashCost hash_cost = auth::HashCost::interactive;
};

class Application {
public:
    /// Opens the store; throws Error(STORE_UNAVAILABLE) when that fails.
    Application(const ApplicationConfig& config, const Clock& clock);

    Application(const Application&) = delete;
    Application& operator=(const Application&) = delete;

    const Clock& clock() const noexcept { return clock_; }
    store::Store& store() noexcept { return store_; }
    const auth::PasswordHasher& hasher() const noexcept { return hasher_; }
    auth::Authenticator& sessions() noexcept { return sessions_; }
    admin::RegistryService& registry() noexcept { return registry_; }
    workflow::PrescriptionService& prescriptions() noexcept { return prescriptions_; }

private:
    const Clock& clock_;
    store::Store store_;
    auth::PasswordHasher hasher_;
    auth::Authenticator sessions_;
    admin::RegistryService registry_;
    workflow::PrescriptionService prescriptions_;
};

}  // namespace rxtropic::api
