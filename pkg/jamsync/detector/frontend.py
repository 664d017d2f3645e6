import numpy as np


def agc_gain(stream: np.ndarray, target_rms: float = 1.0) -> float:
    power = float(np.mean(np.abs(np.asarray(stream)) ** 2)) if np.size(stream) else 0.0
    if power == 0.0:
        return 1.0
    return float(target_rms / np.sqrt(power))
