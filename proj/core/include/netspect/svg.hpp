#pragma once

#include <string>

#include "netspect/spectrum.hpp"

namespace netspect {

/// Two-panel spectrogram: the normalised DL curve on top, prominence stems
/// for the spectral lines below. Dependency-free hand-written SVG.
std::string spectrogram_svg(const Spectrum& spectrum);

}  // namespace netspect
