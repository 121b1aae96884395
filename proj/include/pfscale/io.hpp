#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfscale/constants.hpp"
#include "pfscale/energy.hpp"
#include "pfscale/grid.hpp"
#include "pfscale/lifting.hpp"
#include "pfscale/scaling.hpp"

namespace pfscale {

inline constexpr int kSchemaVersion = 1;

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form ("nan", "inf", "-inf" for non-finite values).
std::string format_real(double v);

// CSV files start with "# schema_version: N", then a header row.
std::string profile_csv(const ScalarField1D& f);
std::string field2d_csv(const ScalarField2D& u);  // masked nodes only
std::string sweep_csv(const std::vector<SweepRecord>& records);
/// Reads back the columns written by sweep_csv. Throws SchemaError.
std::vector<SweepRecord> parse_sweep_csv(const std::string& text);

nlohmann::json to_json(const EnergyBreakdown& b);
nlohmann::json to_json(const ConstantEstimate& e);
nlohmann::json to_json(const LiftReport& r);
nlohmann::json to_json(const SweepRecord& r);
nlohmann::json to_json(const PlateauReport& p);

/// Adds schema_version and serializes with two-space indentation.
std::string dump_document(nlohmann::json doc);
/// Parses a document and rejects a missing or unknown schema_version.
nlohmann::json parse_document(const std::string& text);

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace pfscale
