"""Walk one synthetic thermal frame through the face extraction chain."""

import tempfile
from pathlib import Path

import numpy as np

from tfrs import imageio, preprocess
from tfrs.harness import synth_dataset

workdir = Path(tempfile.mkdtemp())
manifest = synth_dataset(seed=1, n_subjects=2, per_subject=2, out=workdir / "raw")
label, path = manifest.rows[0]
frame = imageio.read_pnm(path)
print(f"{path.name} from subject {label}: {frame.shape}, gray range {frame.min()}..{frame.max()}")

# Pixels at or above the global mean count as warm (face) pixels.
mask = preprocess.binarize(frame)
print("mean gray level:", round(preprocess.mean_gray(frame), 2), " warm fraction:", round(mask.mean(), 3))

# Blobs of warm pixels; the face is the biggest one.
labels = preprocess.label_components(mask)
face_blob = preprocess.largest_component(labels)
print("components:", labels.count, " largest:", int(face_blob.sum()), "pixels")

c = preprocess.centroid(face_blob)
spec = preprocess.estimate_axes(face_blob, c)
print("centroid (1-based x, y):", (round(c.x, 2), round(c.y, 2)))
print("ellipse semi-axes (minor, major):", spec.semi_minor, spec.semi_major)

# The ellipse mask keeps the face and blacks out hair, neck and background.
ell = preprocess.ellipse_mask(spec, frame.shape[1], frame.shape[0])
print("ellipse area:", int(ell.sum()), " vs pi*a*b =", round(np.pi * spec.semi_minor * spec.semi_major))

face = preprocess.crop_and_normalize(frame, spec)
print("normalized face:", face.shape, face.dtype)

# Same thing in one call.
assert np.array_equal(face, preprocess.extract_face(frame))
out = workdir / "face.pgm"
imageio.write_pnm(out, face)
print("wrote", out)
