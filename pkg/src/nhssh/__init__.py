"""Non-Hermitian SSH and extended SSH chains."""
from importlib.resources import files as _files

from .charpoly import (CharSpectrum, Poly, chebyshev_U, chebyshev_U_poly, general_type1_char_spectrum,
                       general_type2_char_spectrum, qh_odd_char_spectrum, qh_type1_char_spectrum,
                       qh_type2_char_spectrum, solve_chain, ssh_char_spectrum)
from .errors import (ChainTooShort, ConfigError, CriticalPoint, DeflationError, GaplessFactor,
                     InvalidAmplitudes, InvalidIndex, InvalidRequest, NHSSHError, NotAChiralPair,
                     NotApplicable, NumericalInconsistency, SolverError)
from .hamiltonian import BlochFactors, bloch_factors, bloch_matrix, build_obc, build_pbc, pbc_spectrum
from .model import (Boundary, ChainSpec, EffectiveParams, HoppingSet, Kind, Parity, PhaseLabel,
                    duality_map, effective_params, from_effective, inverse_duality_map,
                    is_quasi_hermitian, qhc_enforce, qhc_residual, scaling_transform)
from .presets import PRESETS, FigurePreset, get_preset
from .report import ExperimentConfig, ReportBundle, run, sweep
from .spectra import (EdgeStateReport, LocalizationConfig, Side, Spectrum, chiral_recombine,
                      classify_localization, detect_edge_states, eigendecompose, matching_distance,
                      reality_check)
from .topology import (Prediction, TopologyReport, expected_edge_count, modified_winding,
                       predict_edge_distribution, spectral_windings, topology_report, trajectory,
                       winding_on_circle)

__version__ = "0.1.0"


def report_schema() -> dict:
    """The JSON schema that every ``report.json`` validates against."""
    import json
    return json.loads(_files(__name__).joinpath("report.schema.json").read_text(encoding="utf-8"))


__all__ = [name for name in dir() if not name.startswith("_")]
