# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled core for the hot filtering loop (see _native_kernel.c)."""

import numpy as np

cdef extern from "_native_kernel.h" nogil:
    void mefuse_bilateral(const double *lum, const double *tap, double *out,
                          long height, long width, long radius,
                          double inv_sigma_rg2, int num_threads)


def bilateral(const double[:, ::1] lum not None, double sigma_spatial,
              double sigma_range, long radius, int num_threads):
    """Bilateral-filter a 2-D luminance array; returns a new float64 array."""
    if sigma_spatial <= 0.0 or sigma_range <= 0.0:
        raise ValueError("sigma_spatial and sigma_range must be positive")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    cdef long h = lum.shape[0]
    cdef long w = lum.shape[1]
    if h == 0 or w == 0:
        raise ValueError("empty image")
    if num_threads < 1:
        num_threads = 1
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    tap_arr = np.exp(-(offsets * offsets) / (sigma_spatial * sigma_spatial))
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef const double[::1] tap = tap_arr
    cdef double[:, ::1] out = out_arr
    cdef double inv_rg2 = 1.0 / (sigma_range * sigma_range)
    with nogil:
        mefuse_bilateral(&lum[0, 0], &tap[0], &out[0, 0], h, w, radius,
                         inv_rg2, num_threads)
    return out_arr
