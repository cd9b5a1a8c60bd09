#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "robba/parse.hpp"
#include "robba/points.hpp"
#include "robba/tate.hpp"

namespace robba {

/// Wire formats. All numerics are exact rational strings ("5/2", "inf").
nlohmann::json hahn_to_json(const HahnSeries& h);
HahnSeries hahn_from_json(const nlohmann::json& j, const FieldPtr& field);

/// {"coeffs": [[n, hahn], ...], "prec_pi": N|"inf" (, "tail_v": rat)}
nlohmann::json witt_to_json(const WittSeries& w);
WittSeries witt_from_json(const nlohmann::json& j, const FieldPtr& field);

nlohmann::json tate_to_json(const TateSeries& t);
TateSeries tate_from_json(const nlohmann::json& j, const FieldPtr& field);

/// {"unit": hahn-string, "pi_power": a, "factors": [{"u_bar": hahn-string}]}
nlohmann::json factored_to_json(const FactoredElement& f);
FactoredElement factored_from_json(const nlohmann::json& j, const ParseContext& ctx);

/// Generator file: {"n": vars, "radii_log": [w_i...], "r": rat,
///                  "generators": [element-strings...]}
struct GeneratorFile {
    size_t nvars;
    std::vector<Rat> radii_log;
    Rat r;
    std::vector<TateSeries> generators;
};
GeneratorFile generators_from_json(const nlohmann::json& j, const FieldPtr& field,
                                   const Rat& work_prec);

} // namespace robba
