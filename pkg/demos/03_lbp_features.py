"""Local binary pattern codes and block histograms."""

import numpy as np

from tfrs import lbp

# A 3x3 neighborhood; each neighbor at least as bright as the center sets a bit,
# read clockwise from the top-left corner.
hood = np.array([[6, 5, 2], [7, 6, 1], [9, 8, 7]])
code = lbp.lbp_code(hood)
print("code:", code, format(code, "08b"))

# Brightness offsets and contrast stretches leave codes alone.
assert lbp.lbp_code(hood * 3 + 20) == code

rng = np.random.default_rng(0)
face = rng.integers(0, 256, (112, 92))
codes = lbp.lbp_image(face)
print("code image:", codes.shape)  # one-pixel border has no full neighborhood

feat = lbp.block_features(codes, block_size=8)
blocks = feat.size // 256
print("blocks:", blocks, " feature length:", feat.size)
print("pixels per block histogram:", set(feat.reshape(blocks, 256).sum(axis=1)))

# Flat regions all map to 255.
print("constant patch codes:", np.unique(lbp.lbp_image(np.full((5, 5), 40))))
