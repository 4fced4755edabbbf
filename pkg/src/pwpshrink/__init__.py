"""Speech denoising by Teager-energy driven thresholding in a perceptual wavelet packet domain."""
from .framing import AudioBuffer, FrameSequence, frame_signal, make_window, overlap_add
from .metrics import MetricsReport, mix_at_snr, segsnr, segsnr_improvement, spectrogram, wss
from .pipeline import EnhanceConfig, enhance_frame, enhance_signal
from .pwpt import (
    FilterQuad,
    PerceptualTree,
    SubbandFrame,
    build_perceptual_tree,
    db10_filters,
    load_tree,
    pwpt_forward,
    pwpt_inverse,
    save_tree,
)
from .signals import gen_test_signal, white_noise
from .stats import (
    DegenerateFitError,
    FittedPdf,
    Histogram,
    aic,
    fit_exponential,
    fit_gaussian,
    histogram,
    kl_divergence,
    symmetric_kl,
    teager,
)
from .thresholding import (
    NoiseTracker,
    ShrinkageSpec,
    SubbandStats,
    ThresholdPair,
    apply_shrinkage,
    exp_threshold,
    gauss_threshold,
    subband_snr,
    universal_threshold,
    update_noise_estimate,
)
from .wavio import read_wav, write_wav

__version__ = "0.1.0"
