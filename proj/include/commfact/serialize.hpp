#pragma once

// JSON views of certificates and reports.

#include <json.hpp>

#include <string>

#include "commfact/factorizer.hpp"
#include "commfact/filtration.hpp"
#include "commfact/lattice.hpp"
#include "commfact/lowerbound.hpp"

namespace commfact {

struct MatrixFiles {
    std::string b;
    std::string c;
    std::string q;
};

/// Certificate scalars plus references to the files holding B, C and Q.
nlohmann::json certificate_json(const FactorizationCertificate& cert, const MatrixFiles& files);

nlohmann::json energy_json(const EnergyReport& report);
nlohmann::json filtration_json(const Filtration& f, const LemmaReport& lemma);
nlohmann::json lower_bound_json(const LowerBoundReport& report);

} // namespace commfact
