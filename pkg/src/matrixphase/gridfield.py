"""Sampled matrix fields on discrete phase-space grids.

A GridField holds 4x4 complex samples on a rectangular grid over a subset
of the eight phase variables; the remaining variables are fixed parameters.
Periodic axes support spectral derivatives, any axis supports 4th-order
central differences.

Binary layout (little-endian): magic ``MPGF``, u32 version, u32 axis count,
then per axis u32 variable index, u32 point count, f64 extent, f64 origin,
u8 periodic flag; then f64 time; then the samples in C order, 32 f64 per
sample (16 complex entries interleaved re, im).
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import GridError
from .polyfield import NVARS, VAR_NAMES, Field, PhasePoint

__all__ = [
    "AxisSpec",
    "GridSpec",
    "GridField",
    "sample_to_grid",
    "grid_derivative",
    "write_gridfield",
    "read_gridfield",
    "gridfield_to_csv",
]

_MAGIC = b"MPGF"
_VERSION = 1


@dataclass(frozen=True)
class AxisSpec:
    """One gridded variable: points origin + j*extent/n, j = 0..n-1."""

    var: int
    extent: float
    n: int
    periodic: bool = True
    origin: float = 0.0

    def __post_init__(self):
        if not 0 <= self.var < NVARS:
            raise ValueError(f"variable index {self.var} out of range")
        if self.n < 4 or self.extent <= 0:
            raise ValueError("need n >= 4 points and positive extent")

    @property
    def spacing(self) -> float:
        return self.extent / self.n

    def coords(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.n)

    def wavenumbers(self) -> np.ndarray:
        """Spectral wavenumbers matching numpy FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)


@dataclass(frozen=True)
class GridSpec:
    axes: tuple[AxisSpec, ...]
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        vars_ = [a.var for a in self.axes]
        if len(set(vars_)) != len(vars_):
            raise ValueError("duplicate grid axes")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.n for a in self.axes)

    def axis_of(self, var: int) -> int | None:
        for i, a in enumerate(self.axes):
            if a.var == var:
                return i
        return None

    def meshes(self) -> list[np.ndarray]:
        return list(np.meshgrid(*[a.coords() for a in self.axes], indexing="ij"))


@dataclass(frozen=True)
class GridField:
    spec: GridSpec
    samples: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        expect = self.spec.shape + (4, 4)
        if self.samples.shape != expect:
            raise ValueError(f"samples shape {self.samples.shape} != {expect}")

    def total_trace(self) -> complex:
        return complex(np.einsum("...ii->...", self.samples).sum())

    def max_abs(self) -> float:
        return float(np.abs(self.samples).max()) if self.samples.size else 0.0


def sample_to_grid(f: Field, spec: GridSpec, time: float = 0.0) -> GridField:
    """Evaluate an exact Field on every grid point."""
    meshes = spec.meshes()
    coords = []
    for v in range(NVARS):
        ax = spec.axis_of(v)
        if ax is not None:
            coords.append(meshes[ax])
        else:
            coords.append(float(spec.fixed.get(v, 0.0)))
    out = np.zeros(spec.shape + (4, 4), dtype=complex)
    for k, poly in f.terms.items():
        phase = np.exp(1j * sum(k[nu] * coords[nu] for nu in range(4) if k[nu]))
        for exps, coeff in poly.items():
            mono = 1.0
            for v, e in enumerate(exps):
                if e:
                    mono = mono * coords[v] ** e
            weight = np.asarray(phase * mono)
            out += weight[..., None, None] * coeff
    return GridField(spec=spec, samples=out, time=time)


def grid_derivative(gf: GridField, var: int, mode: str = "spectral") -> GridField:
    """Derivative along a gridded variable.

    Spectral mode is exact for band-limited periodic data; fd4 applies a
    4th-order central stencil (one-sided at non-periodic edges).
    """
    ax = gf.spec.axis_of(var)
    if ax is None:
        raise GridError(f"variable {VAR_NAMES[var]} is not gridded")
    axis = gf.spec.axes[ax]
    if mode == "spectral":
        if not axis.periodic:
            raise GridError("spectral derivative requires a periodic axis")
        fw = np.fft.fft(gf.samples, axis=ax)
        kshape = [1] * gf.samples.ndim
        kshape[ax] = axis.n
        fw *= (1j * axis.wavenumbers()).reshape(kshape)
        d = np.fft.ifft(fw, axis=ax)
    elif mode == "fd4":
        d = _fd4(gf.samples, ax, axis.spacing, axis.periodic)
    else:
        raise ValueError(f"unknown derivative mode {mode!r}")
    return GridField(spec=gf.spec, samples=d, time=gf.time)


def _fd4(a: np.ndarray, ax: int, h: float, periodic: bool) -> np.ndarray:
    if periodic:
        return (
            -np.roll(a, -2, axis=ax)
            + 8 * np.roll(a, -1, axis=ax)
            - 8 * np.roll(a, 1, axis=ax)
            + np.roll(a, 2, axis=ax)
        ) / (12 * h)
    a = np.moveaxis(a, ax, 0)
    d = np.empty_like(a)
    d[2:-2] = (-a[4:] + 8 * a[3:-1] - 8 * a[1:-3] + a[:-4]) / (12 * h)
    # 4th-order one-sided stencils at the edges
    d[0] = (-25 * a[0] + 48 * a[1] - 36 * a[2] + 16 * a[3] - 3 * a[4]) / (12 * h)
    d[1] = (-3 * a[0] - 10 * a[1] + 18 * a[2] - 6 * a[3] + a[4]) / (12 * h)
    d[-2] = (3 * a[-1] + 10 * a[-2] - 18 * a[-3] + 6 * a[-4] - a[-5]) / (12 * h)
    d[-1] = (25 * a[-1] - 48 * a[-2] + 36 * a[-3] - 16 * a[-4] + 3 * a[-5]) / (12 * h)
    return np.moveaxis(d, 0, ax)


# -- serialization --------------------------------------------------------


def write_gridfield(gf: GridField, path) -> None:
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", _VERSION, len(gf.spec.axes)))
        for a in gf.spec.axes:
            fh.write(struct.pack("<IIddB", a.var, a.n, a.extent, a.origin, a.periodic))
        fh.write(struct.pack("<d", gf.time))
        flat = np.ascontiguousarray(gf.samples).view(np.float64)
        fh.write(flat.astype("<f8").tobytes())


def read_gridfield(path) -> GridField:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise GridError("not a GridField file")
        version, naxes = struct.unpack("<II", fh.read(8))
        if version != _VERSION:
            raise GridError(f"unsupported version {version}")
        axes = []
        for _ in range(naxes):
            var, n, extent, origin, per = struct.unpack("<IIddB", fh.read(25))
            axes.append(AxisSpec(var=var, extent=extent, n=n, periodic=bool(per), origin=origin))
        (time,) = struct.unpack("<d", fh.read(8))
        spec = GridSpec(axes=tuple(axes))
        raw = np.frombuffer(fh.read(), dtype="<f8")
        samples = raw.view(np.complex128).reshape(spec.shape + (4, 4))
    return GridField(spec=spec, samples=samples.copy(), time=time)


def gridfield_to_csv(gf: GridField, path) -> None:
    """Rows of grid indices followed by 32 reals (16 complex entries)."""
    with open(path, "w", newline="") as fh:
        idx_cols = [f"i{j}" for j in range(len(gf.spec.axes))]
        val_cols = [
            f"{p}{r}{c}" for r in range(4) for c in range(4) for p in ("re", "im")
        ]
        fh.write(",".join(idx_cols + val_cols) + "\n")
        for idx in np.ndindex(*gf.spec.shape):
            m = gf.samples[idx]
            vals = []
            for r in range(4):
                for c in range(4):
                    vals.append(f"{m[r, c].real:.17g}")
                    vals.append(f"{m[r, c].imag:.17g}")
            fh.write(",".join([str(i) for i in idx] + vals) + "\n")
