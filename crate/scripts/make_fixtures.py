"""Regenerates crates/cli/tests/fixtures: 96x96 binary PPM crops of the
scikit-image sample images."""

from pathlib import Path

import numpy as np
from PIL import Image
from skimage import data

SIZE = 96
OUT = Path(__file__).resolve().parent.parent / "crates" / "cli" / "tests" / "fixtures"

SOURCES = {
    "astronaut": data.astronaut,
    "chelsea": data.chelsea,
    "coffee": data.coffee,
    "hubble": data.hubble_deep_field,
    "ihc": data.immunohistochemistry,
    "motorcycle_left": lambda: data.stereo_motorcycle()[0],
    "motorcycle_right": lambda: data.stereo_motorcycle()[1][:, ::-1],
    "retina": data.retina,
    "rocket": data.rocket,
    "colorwheel": data.colorwheel,
    "logo": data.logo,
}


def to_rgb(img: np.ndarray) -> np.ndarray:
    if img.ndim == 2:
        img = np.stack([img] * 3, axis=-1)
    if img.shape[-1] == 4:
        rgb, alpha = img[..., :3].astype(float), img[..., 3:].astype(float) / 255
        img = rgb * alpha + 255 * (1 - alpha)
    return np.clip(img[..., :3], 0, 255).astype(np.uint8)


def square(img: np.ndarray) -> Image.Image:
    h, w = img.shape[:2]
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    crop = Image.fromarray(img[top:top + s, left:left + s])
    return crop.resize((SIZE, SIZE), Image.LANCZOS)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, load in SOURCES.items():
        square(to_rgb(load())).save(OUT / f"{name}.ppm")


if __name__ == "__main__":
    main()
