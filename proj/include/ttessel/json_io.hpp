#ifndef TTESSEL_JSON_IO_HPP
#define TTESSEL_JSON_IO_HPP

#include <string>

#include "ttessel/gibbs_model.hpp"
#include "ttessel/point_process.hpp"
#include "ttessel/tessellation.hpp"

namespace ttessel {

/// Serializes a tessellation as
/// {"domain": [[x,y],...], "segments": [{"alpha": a, "p": p,
///  "endpoints": [[x,y],[x,y]]}, ...]}.
std::string tessellation_to_json(const TTessellation& t);

/// Loads a tessellation, validating all T-tessellation invariants; accepts
/// either the bare format or a document with a "tessellation" field. Throws
/// ValidationError with a diagnostic for non-T-tessellations.
TTessellation tessellation_from_json(const std::string& text);

/// Model config {"model": "crtt"|"angle"|"area", "theta": [...]}.
ExponentialModel model_from_json(const std::string& text);
std::string model_to_json(const ExponentialModel& model, const std::string& name);

/// Point-process model config {"model": "poisson"|"strauss", "theta": [...],
/// "radius": R (strauss only)}.
PpModel pp_model_from_json(const std::string& text);

/// Window descriptor: {"vertices": [[x,y],...]} or {"side": s} or
/// {"width": w, "height": h} (rectangles anchored at the origin).
ConvexPolygon window_from_json(const std::string& text);

}  // namespace ttessel

#endif
