"""Seeded experiment pipelines, signal generators and table I/O."""
from .audio import (
    SCHEMES,
    draw_kept_samples,
    load_audio,
    lowfreq_bins,
    recover_blocks,
    run_audio_experiment,
    save_raw_f64,
)
from .config import AudioConfig, SyntheticConfig, config_from_dict, load_config
from .recovery import make_class_signal, verify_partial_support_recovery
from .signals import gen_sparse_signal, snr, speech_like_signal
from .synthetic import TrialRecord, feasible_size1, run_synthetic_sweep, run_synthetic_trial
from .tables import ResultTable, export_table, import_table_json

__all__ = [
    "SCHEMES",
    "AudioConfig",
    "SyntheticConfig",
    "ResultTable",
    "TrialRecord",
    "config_from_dict",
    "draw_kept_samples",
    "export_table",
    "feasible_size1",
    "gen_sparse_signal",
    "import_table_json",
    "load_audio",
    "load_config",
    "lowfreq_bins",
    "make_class_signal",
    "recover_blocks",
    "run_audio_experiment",
    "run_synthetic_sweep",
    "run_synthetic_trial",
    "save_raw_f64",
    "snr",
    "speech_like_signal",
    "verify_partial_support_recovery",
]
