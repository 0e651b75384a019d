#pragma once

#include <string>
#include <vector>

#include "rotsim/config.hpp"
#include "rotsim/observables.hpp"

// Post-processing of alignment traces: smoothing, revival timing, and the
// Fourier beat spectrum with assignment of peaks to rotational coherences.

namespace rotsim {

/// Centered moving average with odd window; edges shrink symmetrically.
AlignmentTrace smooth_trace(const AlignmentTrace& trace, int window);

struct BeatPeak {
  double freq_thz = 0.0;
  double amplitude = 0.0;
  int j_lower = -1;       // assigned J <-> J+2 coherence, -1 if none
  bool assigned = false;
};

struct BeatSpectrum {
  std::vector<double> freq_thz;
  std::vector<double> amplitude;
  std::vector<BeatPeak> peaks;   // local maxima >= 2% of the strongest
  double bin_thz = 0.0;          // zero-padded bin width
  bool resolution_warning = false;  // window shorter than two revivals
};

/// Magnitude spectrum of the mean-subtracted, Hann-windowed trace segment
/// in [start_fs, stop_fs], zero-padded 8x. Peaks closer than ~1.3 Bc (or
/// four unpadded bins) to a stronger one are treated as window sidelobes
/// and dropped.
BeatSpectrum beat_spectrum(const AlignmentTrace& trace, double start_fs,
                           double stop_fs, const MoleculeSpec& molecule);

/// Labels each peak with the nearest Bc(4J+6) coherence line; peaks more
/// than two bins away stay unassigned.
void assign_beats(BeatSpectrum& spectrum, const MoleculeSpec& molecule);

struct RevivalTime {
  int quarter = 0;          // k in t = k/4 T_rev
  std::string label;        // "1/4", "1/2", ..., reduced
  double time_fs = 0.0;
};

/// Quarter-revival times k/4 T_rev for k = 1 .. 4*count.
std::vector<RevivalTime> revival_times(const MoleculeSpec& molecule,
                                       int count);

struct TraceExtrema {
  double t_max_fs = 0.0;
  double max_value = 0.0;
  double t_min_fs = 0.0;
  double min_value = 0.0;
};

/// Extrema of the trace restricted to [t_lo, t_hi], refined by parabolic
/// interpolation through the neighboring samples.
TraceExtrema find_extrema(const AlignmentTrace& trace, double t_lo_fs,
                          double t_hi_fs);

}  // namespace rotsim
