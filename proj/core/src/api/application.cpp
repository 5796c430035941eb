#include "rxtropic/api/application.hpp"

namespace rxtropic::api {

Application::Application(const ApplicationConfig& config, const Clock& clock)
    : clock_(clock),
      store_(store::Store::open(config.store_dir, config.store_options)),
      hasher_(config.hash_cost),
      sessions_(store_, clock_, hasher_, config.auth),
      registry_(store_, clock_, hasher_, &sessions_),
      prescriptions_(store_, clock_, config.workflow) {}

}  // namespace rxtropic::api
