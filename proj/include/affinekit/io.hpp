#pragma once

// JSON encodings of the library types. Rationals are written as "p/q" strings;
// exact vectors over a symbol basis as one coefficient array per entry.

#include <json.hpp>
#include <string>
#include <vector>

#include "affinekit/affine.hpp"
#include "affinekit/atlas.hpp"
#include "affinekit/cech.hpp"
#include "affinekit/exact.hpp"
#include "affinekit/lattice.hpp"
#include "affinekit/measure.hpp"
#include "affinekit/realization.hpp"
#include "affinekit/variation.hpp"

namespace affinekit::io {

using Json = nlohmann::ordered_json;

Json read_file(const std::string& path);
std::string dump(const Json& j);  // two-space indent, trailing newline

// scalars and vectors
Rational rational_from(const Json& j);
Json to_json(const Rational& q);
Json to_json(const Integer& z);
BasisPtr basis_from(const Json& j);  // {"symbols": [...]} or absent
Json to_json(const PeriodBasis& B);
ExactScalar scalar_from(const Json& j, const BasisPtr& B);
ExactVector vector_from(const Json& j, const BasisPtr& B = PeriodBasis::rational_only());
Json to_json(const ExactScalar& s);
Json to_json(const ExactVector& v);
Json to_json(const std::vector<ExactVector>& vs);
IntMatrix int_matrix_from(const Json& j);
Json to_json(const IntMatrix& M);
IntVector int_vector_from(const Json& j);
Json to_json(const IntVector& v);
std::vector<double> doubles_from(const Json& j);

// groups and atlases
AffineElement element_from(const Json& j, const BasisPtr& B);
Json to_json(const AffineElement& g);
GroupPresentation group_from(const Json& j);
Json to_json(const GroupAnalysis& a);
AtlasGraph atlas_from(const Json& j);

// leaves and periods
LeafModel leaf_from(const Json& j);
Json to_json(const DiscretenessVerdict& v);
Json to_json(const MonodromyFamily& f);

// realizations
MomentSystem system_from(const Json& j);  // a builtin name or {"name","n","mu",...}
Json to_json(const PeriodLatticeEstimate& e);

// measures
Json to_json(const MeasureHistogram& h);
std::string histogram_csv(const MeasureHistogram& h);

// nerves and cochains
/// {"vertices", "simplices": {"1": [...], ...}, "rank", "ring", "monodromy": {"a,b": M}}
/// or {"builtin": "torus" | "circle" | "sphere" | "rp2" | "simplex", ...}.
LocalSystem local_system_from(const Json& j);
Cochain cochain_from(const Json& j, const LocalSystem& sys);
Json to_json(const Cochain& c, const LocalSystem& sys);
TransitionLifts lifts_from(const Json& j, const LocalSystem& sys);
Json to_json(const CohomologyGroup& H);
Json to_json(const ChernClass& c);

}  // namespace affinekit::io
