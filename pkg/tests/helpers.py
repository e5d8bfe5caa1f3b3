"""Shared random-instance generators and the CNN gradient checker."""

import numpy as np

from wlmf import CnnConfig, CnnParams, CovariancePair, backward, forward, make_dataset


def random_hermitian_pd(rng, dim, ridge=0.5):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    r = a @ a.conj().T + ridge * np.eye(dim)
    return 0.5 * (r + r.conj().T)


def random_improper_pair(rng, dim, scale=0.6, ridge=0.05):
    """Valid (R, C) of a widely linear mix w = A u + B conj(u), u circular.

    The augmented matrix equals a Gram matrix plus ridge x I, so it is
    positive definite by construction.
    """
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    b = scale * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    r = a @ a.conj().T + b @ b.conj().T + ridge * np.eye(dim)
    c = a @ b.T + b @ a.T
    return CovariancePair(r=0.5 * (r + r.conj().T), c=0.5 * (c + c.T))


def random_unitary(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, upper = np.linalg.qr(a)
    return q * (np.diag(upper) / np.abs(np.diag(upper)))


def jointly_diagonalizable_pair(rng, dim):
    """(R, C) sharing one unitary eigenstructure with strictly spaced,
    co-monotone spectra, so the uncorrelating transform is exact."""
    q = random_unitary(rng, dim)
    lam = 1.0 + 0.3 * np.arange(dim)[::-1] + 0.1 * rng.uniform(size=dim)
    lam = np.sort(lam)[::-1]
    rho = np.linspace(0.85, 0.15, dim) + 0.02 * rng.uniform(size=dim)
    rho = np.sort(rho)[::-1]
    p = rho * lam
    r = q @ np.diag(lam) @ q.conj().T
    c = q @ np.diag(p) @ q.T
    return CovariancePair(r=0.5 * (r + r.conj().T), c=0.5 * (c + c.T))


def random_cnn_params(rng, config):
    shape = (config.channels, config.filter_len)
    conv1 = 0.3 * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    conv2 = None
    if config.mode == "wl":
        conv2 = 0.3 * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return CnnParams(
        conv1=conv1,
        conv2=conv2,
        bias_re=rng.uniform(-0.2, 0.2, config.channels),
        bias_im=rng.uniform(-0.2, 0.2, config.channels),
        head_w=0.3 * rng.standard_normal((2, 2 * config.channels)),
        head_b=0.1 * rng.standard_normal(2),
    )


def _kink_margins(x, params):
    """Distance to the nearest ReLU sign flip and pooling tie."""
    from wlmf import conv_forward

    y = conv_forward(x, params)
    re = np.abs(y.real + params.bias_re[:, None])
    im = np.abs(y.imag + params.bias_im[:, None])
    a = np.maximum(y.real + params.bias_re[:, None], 0) + 1j * np.maximum(
        y.imag + params.bias_im[:, None], 0
    )
    mods = np.sort(np.abs(a), axis=1)
    tie_gap = mods[:, -1] - mods[:, -2]
    return min(re.min(), im.min()), tie_gap.min()


def kink_free_case(rng, mode, margin=1e-3):
    """Rejection-sample a (sample, params) pair away from ReLU kinks and
    pooling ties, so central differences see a locally smooth loss."""
    config = CnnConfig(mode=mode)
    while True:
        params = random_cnn_params(rng, config)
        sample = make_dataset(1, rng)[0]
        relu_gap, tie_gap = _kink_margins(sample.x, params)
        if relu_gap > margin and tie_gap > margin:
            return sample, params


def _param_slots(params):
    yield "conv1", params.conv1, True
    if params.conv2 is not None:
        yield "conv2", params.conv2, True
    yield "bias_re", params.bias_re, False
    yield "bias_im", params.bias_im, False
    yield "head_w", params.head_w, False
    yield "head_b", params.head_b, False


def gradient_check(sample, params, h=1e-6):
    """Max relative error of analytic vs central-difference gradients,
    taken per parameter array over its stacked real slots."""

    def loss_at(p):
        loss, _, _ = backward(sample.x, sample.t, p)
        return loss

    _, _, grads = backward(sample.x, sample.t, params)
    worst = 0.0
    for name, array, is_complex in _param_slots(params):
        numeric = np.zeros(array.shape + ((2,) if is_complex else ()))
        for idx in np.ndindex(array.shape):
            parts = (1.0, 1j) if is_complex else (1.0,)
            for part_i, part in enumerate(parts):
                probe = params.copy()
                getattr(probe, name)[idx] += h * part
                up = loss_at(probe)
                probe = params.copy()
                getattr(probe, name)[idx] -= h * part
                down = loss_at(probe)
                value = (up - down) / (2 * h)
                if is_complex:
                    numeric[idx + (part_i,)] = value
                else:
                    numeric[idx] = value
        analytic = grads[name]
        if is_complex:
            analytic = np.stack([analytic.real, analytic.imag], axis=-1)
        scale = max(float(np.linalg.norm(analytic)), 1e-8)
        worst = max(worst, float(np.linalg.norm(numeric - analytic)) / scale)
    return worst
