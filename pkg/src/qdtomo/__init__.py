"""Forward simulation and analysis of two-pulse, polarization-resolved photon
correlations from a quantum-dot hole-trion spin system in a transverse field.

Submodules
----------
spin_core     Bloch-vector spin model: precession, dephasing, selection rules.
config        Experiment configuration, key=value file format, config digest.
sequence_sim  Monte-Carlo two-pulse protocol simulator + analytic forward model.
timetag_io    Binary coincidence-event file format and its CSV twin.
correlate     2D correlation maps, slices, DCP traces, sigma statistics.
fitter        Weighted damped Gauss-Newton fits of the trace models.
tomography    Bloch-vector reconstruction, component fits, precession-plane fit.
cli           Command-line pipeline (simulate / correlate / fit / tomo / report).
"""

__version__ = "0.1.0"
