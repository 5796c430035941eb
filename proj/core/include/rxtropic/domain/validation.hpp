/**
 * @file validation.hpp
 * @brief Type invariants and the prescription lifecycle edge set
 *
 * validate_entity checks only invariants that can be decided from the value
 * itself. Referential checks (a drug id names an existing drug, a prescriber is
 * a doctor) belong to the services that hold a store snapshot.
 */

#pragma once

#include "rxtropic/domain/types.hpp"

#include <string>
#include <vector>

namespace rxtropic {

/// True for exactly the five lifecycle edges.
bool is_legal_transition(PrescriptionStatus from, PrescriptionStatus to) noexcept;

bool is_terminal(PrescriptionStatus status) noexcept;

std::vector<std::string> validate_entity(const PractitionerAccount& account);
std::vector<std::string> validate_entity(const Patient& patient, Date today);
std::vector<std::string> validate_entity(const Disease& disease);
std::vector<std::string> validate_entity(const Drug& drug);
std::vector<std::string> validate_entity(const InteractionRule& rule);
std::vector<std::string> validate_entity(const PrescriptionItem& item);
std::vector<std::string> validate_entity(const ValidationFinding& finding);
std::vector<std::string> validate_entity(const OverrideRecord& record);
std::vector<std::string> validate_entity(const Prescription& prescription);

/// Throws Error(VALIDATION) joining the messages when the list is nonempty.
void require_valid(const std::vector<std::string>& violations);

}  // namespace rxtropic
