#pragma once

#include <string>

#include <json.hpp>

#include "defvar/catalog.hpp"
#include "defvar/num/types.hpp"

namespace defvar::io {

/// CSV with a header row; doubles printed with %.17g so replays are
/// byte-identical for identical inputs.
void write_trajectory_csv(const std::string& path, const num::Trajectory& t);

/// Long-format CSV: t,x,<name> rows per snapshot point.
void write_fieldgrid_csv(const std::string& path, const num::FieldGrid& g,
                         const std::string& value_name = "u");

void write_ensemble_csv(const std::string& path, const num::EnsembleStats& s);

nlohmann::json manifest_json(const num::Trajectory& t);
nlohmann::json manifest_json(const num::FieldGrid& g);
nlohmann::json manifest_json(const num::EnsembleStats& s);

nlohmann::json to_json(const ELResult& r, const std::string& system);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json systems_json();

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace defvar::io
