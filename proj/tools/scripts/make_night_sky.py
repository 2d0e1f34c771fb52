"""Writes the bundled palette test image: a swirling night sky with a moon,
stars, a dark tree and a lit village. Deterministic."""

import sys

import numpy as np
from PIL import Image

W, H = 320, 240


def main(path: str) -> None:
    rng = np.random.default_rng(1889)
    y, x = np.mgrid[0:H, 0:W].astype(np.float64)

    # Sky: deep blue to teal with sinusoidal swirl bands.
    t = y / H
    swirl = 0.5 + 0.5 * np.sin(x / 23.0 + 3.0 * np.sin(y / 31.0) + np.hypot(x - 150, y - 90) / 17.0)
    sky = np.stack(
        [
            20 + 40 * t + 60 * swirl * (1 - t),
            40 + 60 * t + 90 * swirl * (1 - t),
            90 + 60 * (1 - t) + 70 * swirl,
        ],
        axis=-1,
    )

    # Moon with a soft halo.
    d = np.hypot(x - 265, y - 45)
    halo = np.clip(1 - d / 45.0, 0, 1)[..., None] ** 2
    sky = sky * (1 - halo) + np.array([245, 215, 90]) * halo
    sky[d < 16] = [250, 225, 80]

    # Stars.
    for cx, cy in rng.uniform([10, 10], [W - 10, H * 0.55], size=(9, 2)):
        ds = np.hypot(x - cx, y - cy)
        glow = np.clip(1 - ds / 9.0, 0, 1)[..., None]
        sky = sky * (1 - glow) + np.array([235, 230, 160]) * glow

    # Village band along the bottom with lit windows.
    ground = y > H * 0.72 + 8 * np.sin(x / 40.0)
    sky[ground] = [30, 45, 70]
    for wx, wy in rng.uniform([40, H * 0.78], [W - 10, H - 8], size=(24, 2)):
        sky[int(wy) : int(wy) + 3, int(wx) : int(wx) + 4] = [230, 190, 60]

    # Dark flame-shaped tree on the left.
    half_width = np.clip((y - 20) / H, 0, 1) * 28 * (1 + 0.25 * np.sin(y / 6.0))
    sky[np.abs(x - 45) < half_width] = [25, 35, 20]

    img = np.clip(sky + rng.normal(0, 3, sky.shape), 0, 255).astype(np.uint8)
    Image.fromarray(img, "RGB").save(path, optimize=False)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "night_sky.png")
