"""File I/O and synthetic exposure stacks.

Supports Radiance RGBE (.hdr) for scene-referred radiance maps, and 8-bit
PNG / binary PPM for display-referred LDR images.  Synthetic stacks realise
the linear camera model: each member is a power-of-two exposure scaling of
the same radiance map, clipped to [0, 1] and quantised like a camera would.
"""

from __future__ import annotations

import io
import re

import numpy as np
from PIL import Image

from .imgcore import ExposureStack, geometric_mean, luminance_of, validate_rgb

_RGBE_MAGIC = (b"#?RADIANCE", b"#?RGBE")
_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_RESOLUTION_RE = re.compile(rb"^-Y (\d+) \+X (\d+)$")


class HdrFormatError(ValueError):
    """Malformed or unsupported image file contents."""


# --- Radiance RGBE ---------------------------------------------------------

def _decode_rgbe_pixels(rgbe: np.ndarray) -> np.ndarray:
    """(..., 4) uint8 -> (..., 3) float64 via (m + 0.5) / 256 * 2^(e - 128)."""
    mantissa = rgbe[..., :3].astype(np.float64)
    exponent = rgbe[..., 3].astype(np.int32)
    scale = np.ldexp(1.0 / 256.0, exponent - 128)
    out = (mantissa + 0.5) * scale[..., None]
    out[exponent == 0] = 0.0
    return out


def _read_header(data: bytes):
    if not data.startswith(_RGBE_MAGIC):
        raise HdrFormatError("not a Radiance RGBE file (bad magic)")
    pos = 0
    fmt_seen = False
    while True:
        end = data.find(b"\n", pos)
        if end < 0:
            raise HdrFormatError("truncated RGBE header")
        line = data[pos:end]
        pos = end + 1
        if line == b"":
            break
        if line.startswith(b"#"):
            continue
        if line.startswith(b"FORMAT="):
            if line != b"FORMAT=32-bit_rle_rgbe":
                raise HdrFormatError(f"unsupported RGBE format {line[7:]!r}")
            fmt_seen = True
        # other header variables (EXPOSURE, ...) carry no pixel data
    if not fmt_seen:
        raise HdrFormatError("missing FORMAT=32-bit_rle_rgbe header line")
    end = data.find(b"\n", pos)
    if end < 0:
        raise HdrFormatError("missing resolution line")
    m = _RESOLUTION_RE.match(data[pos:end])
    if not m:
        raise HdrFormatError(
            f"unsupported resolution/orientation line {data[pos:end]!r}"
        )
    height, width = int(m.group(1)), int(m.group(2))
    if height < 1 or width < 1:
        raise HdrFormatError("degenerate image dimensions")
    return width, height, end + 1


def _read_rle_scanline(data: bytes, pos: int, width: int, row: np.ndarray) -> int:
    """Decode one new-style RLE scanline (caller verified the 2,2 marker)."""
    pos += 4
    for c in range(4):
        filled = 0
        while filled < width:
            if pos >= len(data):
                raise HdrFormatError("truncated RLE scanline")
            code = data[pos]
            pos += 1
            if code > 128:  # run of one repeated byte
                count = code - 128
                if pos >= len(data) or filled + count > width:
                    raise HdrFormatError("truncated RLE scanline")
                row[filled:filled + count, c] = data[pos]
                pos += 1
            else:  # literal bytes
                count = code
                if count == 0 or filled + count > width or pos + count > len(data):
                    raise HdrFormatError("truncated RLE scanline")
                row[filled:filled + count, c] = np.frombuffer(
                    data, dtype=np.uint8, count=count, offset=pos)
                pos += count
            filled += count
    return pos


def read_rgbe(data: bytes) -> np.ndarray:
    """Decode a Radiance RGBE file into an (H, W, 3) float64 radiance map."""
    width, height, pos = _read_header(data)
    rgbe = np.empty((height, width, 4), dtype=np.uint8)
    for y in range(height):
        is_rle = (
            8 <= width <= 32767
            and pos + 4 <= len(data)
            and data[pos] == 2 and data[pos + 1] == 2
            and (data[pos + 2] << 8) | data[pos + 3] == width
        )
        if is_rle:
            pos = _read_rle_scanline(data, pos, width, rgbe[y])
        else:
            need = 4 * width
            if pos + need > len(data):
                raise HdrFormatError("truncated flat scanline")
            rgbe[y] = np.frombuffer(
                data, dtype=np.uint8, count=need, offset=pos).reshape(width, 4)
            pos += need
    return _decode_rgbe_pixels(rgbe)


def _encode_rgbe_pixels(img: np.ndarray) -> np.ndarray:
    """(..., 3) float64 -> (..., 4) uint8, shared exponent per pixel.

    Samples beyond the format's ceiling (just under 2^127 * 256/256)
    saturate at the largest representable value.
    """
    peak = img.max(axis=-1)
    zero = peak < 1e-38
    _, exponent = np.frexp(np.where(zero, 1.0, peak))
    exponent = np.minimum(exponent, 127)
    mantissa = np.floor(img * np.ldexp(256.0, -exponent)[..., None])
    rgbe = np.empty(img.shape[:-1] + (4,), dtype=np.uint8)
    rgbe[..., :3] = np.clip(mantissa, 0, 255)
    rgbe[..., 3] = np.where(zero, 0, exponent + 128)
    rgbe[zero, :3] = 0
    return rgbe


def _rle_encode_plane(plane: np.ndarray) -> bytes:
    """One component plane as new-style RLE blocks (runs of >= 4 bytes)."""
    out = bytearray()
    n = len(plane)
    i = 0
    while i < n:
        run_start = i
        run_len = 1
        # locate the next run worth encoding
        while run_start < n:
            run_len = 1
            while (run_start + run_len < n and run_len < 127
                   and plane[run_start + run_len] == plane[run_start]):
                run_len += 1
            if run_len >= 4:
                break
            run_start += run_len
        if run_start >= n:
            run_start = n
        lit = i
        while lit < run_start:  # literal bytes before the run
            count = min(128, run_start - lit)
            out.append(count)
            out.extend(plane[lit:lit + count].tobytes())
            lit += count
        if run_start < n:
            out.append(128 + run_len)
            out.append(int(plane[run_start]))
            i = run_start + run_len
        else:
            i = n
    return bytes(out)


def write_rgbe(img: np.ndarray, *, rle: bool = True) -> bytes:
    """Encode an (H, W, 3) radiance map as a Radiance RGBE file.

    Scanlines use new-style RLE when the width allows it (and rle is True),
    flat pixels otherwise.
    """
    img = validate_rgb(img, name="radiance map")
    height, width = img.shape[:2]
    rgbe = _encode_rgbe_pixels(img)
    out = bytearray()
    out.extend(b"#?RADIANCE\n")
    out.extend(b"FORMAT=32-bit_rle_rgbe\n\n")
    out.extend(f"-Y {height} +X {width}\n".encode())
    use_rle = rle and 8 <= width <= 32767
    for y in range(height):
        if use_rle:
            out.extend(bytes((2, 2, width >> 8, width & 0xFF)))
            for c in range(4):
                out.extend(_rle_encode_plane(rgbe[y, :, c]))
        else:
            out.extend(rgbe[y].tobytes())
    return bytes(out)


# --- synthetic exposure stacks ---------------------------------------------

def quantize_8bit(img: np.ndarray) -> np.ndarray:
    """Round half up onto the 8-bit grid, keeping the [0, 1] scale."""
    return np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5) / 255.0


def synth_exposures(hdr: np.ndarray, ev_offsets, anchor_key: float = 0.18, *,
                    quantize: bool = True, epsilon: float = 1e-6) -> ExposureStack:
    """Simulate a multi-exposure capture of a radiance map.

    A global scale anchors the geometric-mean luminance of the 0 EV
    rendering at anchor_key; the member at offset v is then
    clip(2^v * scale * E, 0, 1), quantised to 8 bits unless disabled.
    Before clipping and quantisation, members obey the linear model
    exactly: one EV up doubles every sample.
    """
    hdr = validate_rgb(hdr, name="radiance map")
    evs = [float(v) for v in ev_offsets]
    if not evs:
        raise ValueError("need at least one EV offset")
    if any(a >= b for a, b in zip(evs, evs[1:])):
        raise ValueError("EV offsets must be strictly increasing")
    lum = luminance_of(hdr)
    if not np.any(lum > 0):
        raise ValueError("all-zero radiance map: exposure anchor undefined")
    scale = anchor_key / geometric_mean(lum, epsilon)
    images = []
    for v in evs:
        member = np.clip(2.0 ** v * scale * hdr, 0.0, 1.0)
        if quantize:
            member = quantize_8bit(member)
        images.append(member)
    return ExposureStack(images=tuple(images), evs=tuple(evs))


# --- LDR files --------------------------------------------------------------

def _read_ppm(data: bytes) -> np.ndarray:
    # header tokens may be separated by arbitrary whitespace and comments
    tokens = []
    pos = 2  # past "P6"
    while len(tokens) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            eol = data.find(b"\n", pos)
            if eol < 0:
                raise HdrFormatError("truncated PPM comment")
            pos = eol + 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise HdrFormatError("truncated PPM header")
        tokens.append(data[start:pos])
    if not (pos < len(data) and data[pos:pos + 1].isspace()):
        raise HdrFormatError("malformed PPM header")
    pos += 1  # single whitespace byte before the raster
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise HdrFormatError("non-numeric PPM header field")
    if maxval != 255:
        raise HdrFormatError(f"unsupported PPM maxval {maxval} (need 255)")
    if width < 1 or height < 1:
        raise HdrFormatError("degenerate PPM dimensions")
    need = width * height * 3
    if len(data) - pos < need:
        raise HdrFormatError("truncated PPM raster")
    raster = np.frombuffer(data, dtype=np.uint8, count=need, offset=pos)
    return raster.reshape(height, width, 3).astype(np.float64) / 255.0


def read_ldr(data: bytes) -> np.ndarray:
    """Decode an 8-bit PNG or binary PPM into an (H, W, 3) image in [0, 1]."""
    if data.startswith(_PNG_MAGIC):
        try:
            with Image.open(io.BytesIO(data)) as im:
                arr = np.asarray(im.convert("RGB"), dtype=np.float64)
        except Exception as exc:
            raise HdrFormatError(f"malformed PNG stream: {exc}") from exc
        return arr / 255.0
    if data.startswith(b"P6"):
        return _read_ppm(data)
    raise HdrFormatError("unrecognised LDR image format (expected PNG or PPM P6)")


def write_ldr(img: np.ndarray, format: str = "png") -> bytes:
    """Encode an LDR image as 8-bit PNG or binary PPM, rounding half up."""
    img = validate_rgb(img, ldr=True, name="LDR image")
    raster = np.floor(img * 255.0 + 0.5).astype(np.uint8)
    if format == "png":
        buf = io.BytesIO()
        Image.fromarray(raster, mode="RGB").save(buf, format="PNG")
        return buf.getvalue()
    if format == "ppm":
        header = f"P6\n{img.shape[1]} {img.shape[0]}\n255\n".encode()
        return header + raster.tobytes()
    raise ValueError(f"unsupported LDR format {format!r} (use 'png' or 'ppm')")


# --- path-level helpers ------------------------------------------------------

def load_image(path) -> np.ndarray:
    """Read .hdr as a radiance map or .png/.ppm as an LDR image."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(_RGBE_MAGIC):
        return read_rgbe(data)
    return read_ldr(data)


def save_ldr(img: np.ndarray, path) -> None:
    fmt = "ppm" if str(path).lower().endswith(".ppm") else "png"
    with open(path, "wb") as fh:
        fh.write(write_ldr(img, format=fmt))
