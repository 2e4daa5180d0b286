#pragma once

#include <string>

#include "dilatlab/cc_distance.hpp"
#include "dilatlab/dilatation.hpp"
#include "dilatlab/frame.hpp"

namespace dilatlab {

inline constexpr int kManifestSchema = 1;

/// A frame declared by polynomial vector fields. JSON layout:
///
///   {"schema": 1, "name": "...", "dim": n,
///    "generators": [field, ...],        // degree-1 fields
///    "fields": [field, ...],            // optional higher fields
///    "degrees": [1, 1, 2],              // optional, for generators + fields
///    "probes": [[...], ...],            // optional, default: origin
///    "origin": [...], "chart_half_width": 10,
///    "injectivity_radius": 0.5, "working_radius": 0.5,
///    "cc": {"segments": 64, "starts": 8, "stages": 5}}
///
/// A field is a list of n components; a component is a list of monomials
/// {"coef": c, "exps": [e_1, ..., e_n]}. Without "fields" the frame is built
/// from brackets of the generators; with "fields" but no "degrees" the
/// degrees are derived from the bracket filtration.
struct FrameManifest {
  std::string name;
  Frame frame;
  Point origin;
  double working_radius = 0.5;
  CcOptions cc;
};

/// Throws Config with the offending field named.
FrameManifest parse_manifest(const std::string& json_text);
FrameManifest load_manifest(const std::string& path);

/// sr_dilatation over the manifest frame with the transcription CC distance.
DilatationStructure manifest_structure(const FrameManifest& m);

}  // namespace dilatlab
