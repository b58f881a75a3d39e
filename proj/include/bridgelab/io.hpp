#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bridgelab/characteristics.hpp"
#include "bridgelab/dynamics.hpp"
#include "bridgelab/model.hpp"
#include "bridgelab/nonlinearity.hpp"
#include "bridgelab/spectral.hpp"
#include "bridgelab/timestepper.hpp"
#include "bridgelab/types.hpp"

namespace bridgelab {

using nlohmann::json;

// JSON bindings. ModelParams carries xi either as an exact rational multiple
// of ell ({"num": p, "den": q}) or as an absolute float coordinate.
void to_json(json& j, const Rational& r);
void from_json(const json& j, Rational& r);
void to_json(json& j, const ModelParams& p);
void from_json(const json& j, ModelParams& p);
void to_json(json& j, const NonlinearitySpec& s);  // tagged by "family"
void from_json(const json& j, NonlinearitySpec& s);
void to_json(json& j, const DampingPointClass& c);
void to_json(json& j, const EnergyBreakdown& e);
void to_json(json& j, const SpectrumReport& r);
void to_json(json& j, const ResolventSweep& r);
void to_json(json& j, const TransmissionInfReport& r);
void to_json(json& j, const DecayFit& f);
void to_json(json& j, const WorkBoundReport& r);
void to_json(json& j, const SplittingReport& r);
void to_json(json& j, const AbsorbingReport& r);
void to_json(json& j, const AttractorReport& r);

// Dense matrices as row-major arrays of [re, im] pairs.
json matrix_to_json(const Matrix& m);
json matrix_to_json(const ComplexMatrix& m);
json generator_to_json(const DiscreteGenerator& gen);

// Files. Readers throw IoError when the file cannot be opened; JSON parse
// errors propagate as nlohmann parse_error.
json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

// CSV with one leading "# ..." comment line describing the columns, then a
// header row; numbers printed with %.17g so rereads are lossless.
void write_csv(const std::string& path, const std::string& comment,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);
void write_resolvent_csv(const std::string& path, const ResolventSweep& sweep);
void write_characteristics_csv(const std::string& path, const CharacteristicsRun& run);
void write_snapshot_csv(const std::string& path, const RiemannField& field);
void write_matrix_csv(const std::string& path, const std::string& comment,
                      const Matrix& m);

std::string format_double(double x);  // %.17g

// FNV-1a over the file bytes, as a fixed-width hex string.
std::uint64_t fnv1a64(const std::string& bytes);
std::string file_hash(const std::string& path);

// Manifest of emitted artifacts: {"schema": "bridgelab/manifest/1",
// "files": [{"path", "bytes", "fnv1a64"}...], "summary": ...}. Paths are
// stored relative to the manifest's directory.
void write_manifest(const std::string& dir, const std::vector<std::string>& filenames,
                    const json& summary);

}  // namespace bridgelab
