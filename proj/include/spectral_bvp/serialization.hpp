#pragma once

#include "spectral_bvp/inverse.hpp"

#include "json.hpp"

#include <string>

namespace sbvp {

using Json = nlohmann::json;

// Parsers throw ValidationError naming the offending location, e.g. "problem.f.poles[1].residue".
Json to_json(const RationalBC& f);
Json to_json(const Potential& s);
Json to_json(const Problem& p);
Json to_json(const SpectralData& d);
Json to_json(const TransformRecord& r);
Json to_json(const ChainReduction& c);
Json to_json(const FitReport& r);
Json to_json(const InverseReport& r);
Json to_json(const TwoSpectraInput& in);
Json to_json(const TwoSpectraResult& r);
Json to_json(const TwoProblemDiagnostics& d);
Json to_json(const HalfInverseReport& r);

RationalBC rational_bc_from_json(const Json& j, const std::string& where = "bc");
Potential potential_from_json(const Json& j, const std::string& where = "s");
Problem problem_from_json(const Json& j, const std::string& where = "problem");
SpectralData spectral_data_from_json(const Json& j, const std::string& where = "data");
TwoSpectraInput two_spectra_input_from_json(const Json& j, const std::string& where = "input");

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
// Pretty-printed with round-trip precision for doubles.
std::string dump(const Json& j);

}  // namespace sbvp
