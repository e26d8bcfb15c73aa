# Copyright 2026 The monoloc Authors.
# SPDX-License-Identifier: Apache-2.0
"""Writes the FA-Net parity fixture used by test_fanet.

A PyTorch definition of the network (same tensor names and layouts as the
C++ model) is filled with seeded random weights, including non-trivial
batch-norm statistics, and run on features of two synthetic recordings
(T = 22 and T = 47). Outputs:

    tests/data/parity_weights.fanw   weight container
    tests/data/parity_fixture.mltf   <case>.audio / .input / .expected

Usage: python3 tests/fixtures/make_parity_fixture.py [--out tests/data]
"""

import argparse
import json
import math
import pathlib
import struct

import numpy as np
import torch
from torch import nn

CONFIG = {
    "subbands": 16,
    "channels": 32,
    "fa_blocks": 4,
    "attn_heads": 4,
    "attn_channels": 4,
    "gru_hidden": 32,
    "freq_bins": 256,
    "kernels": [[1, 3], [3, 7], [7, 15]],
}
FS = 16000
FRAME, HOP, NFFT = 512, 128, 512


class FilterProcess(nn.Module):
    def __init__(self, c, kernels):
        super().__init__()
        self.conv = nn.Conv2d(c, c, 1)
        self.bn = nn.BatchNorm2d(c)
        self.prelu = nn.PReLU(1)
        for i, (kh, kw) in enumerate(kernels):
            setattr(self, f"dw{i}", nn.Conv2d(c, c, (kh, kw), padding=(kh // 2, kw // 2), groups=c))
        self.fuse = nn.Conv2d(3 * c, c, 1, groups=c)

    def forward(self, x):
        y = self.prelu(self.bn(self.conv(x)))
        branches = [self.dw0(y), self.dw1(y), self.dw2(y)]
        # Interleave so that group c receives (branch0[c], branch1[c], branch2[c]).
        stacked = torch.stack(branches, dim=2).flatten(1, 2)
        return x + self.fuse(stacked)


class SelfAttention(nn.Module):
    def __init__(self, c, heads, att):
        super().__init__()
        self.heads, self.att = heads, att
        self.query = nn.Conv2d(c, heads * att, 1)
        self.key = nn.Conv2d(c, heads * att, 1)
        self.value = nn.Conv2d(c, c, 1)
        self.proj = nn.Conv2d(c, c, 1)

    def forward(self, x):
        b, c, f, t = x.shape
        q = self.query(x).reshape(b, self.heads, self.att * f, t)
        k = self.key(x).reshape(b, self.heads, self.att * f, t)
        v = self.value(x).reshape(b, self.heads, (c // self.heads) * f, t)
        scores = torch.einsum("bhdi,bhdj->bhij", q, k) / math.sqrt(self.att * f)
        a = torch.softmax(scores, dim=-1)
        out = torch.einsum("bhij,bhdj->bhdi", a, v).reshape(b, c, f, t)
        return x + self.proj(out)


class ChannelNorm(nn.Module):
    def __init__(self, c, eps=1e-5):
        super().__init__()
        self.weight = nn.Parameter(torch.ones(c))
        self.bias = nn.Parameter(torch.zeros(c))
        self.eps = eps

    def forward(self, x):
        mean = x.mean(dim=1, keepdim=True)
        var = x.var(dim=1, unbiased=False, keepdim=True)
        y = (x - mean) / torch.sqrt(var + self.eps)
        return y * self.weight[None, :, None, None] + self.bias[None, :, None, None]


class FaBlock(nn.Module):
    def __init__(self, cfg):
        super().__init__()
        c = cfg["channels"]
        self.filter = FilterProcess(c, cfg["kernels"])
        self.attn = SelfAttention(c, cfg["attn_heads"], cfg["attn_channels"])
        self.norm = ChannelNorm(c)

    def forward(self, x):
        return self.norm(self.attn(self.filter(x)))


class Input(nn.Module):
    def __init__(self, cin, c):
        super().__init__()
        self.conv = nn.Conv2d(cin, c, 1)
        self.bn = nn.BatchNorm2d(c)
        self.prelu = nn.PReLU(1)

    def forward(self, x):
        return self.prelu(self.bn(self.conv(x)))


class FaNet(nn.Module):
    def __init__(self, cfg):
        super().__init__()
        c = cfg["channels"]
        self.input = Input(4 * cfg["subbands"], c)
        self.blocks = nn.ModuleList(FaBlock(cfg) for _ in range(cfg["fa_blocks"]))
        self.gru = nn.GRU(c, cfg["gru_hidden"], batch_first=True)
        self.head = nn.Linear(cfg["gru_hidden"], 1)

    def forward(self, x):
        h = self.input(x)
        for block in self.blocks:
            h = block(h)
        pooled = h.mean(dim=2).transpose(1, 2)  # [B, T, C]
        out, _ = self.gru(pooled)
        return torch.relu(self.head(out)).squeeze(-1)


def features(audio):
    """[4, 256, T] float64: Re, Im, sin(phase), cos(phase)."""
    n = np.arange(FRAME)
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * n / FRAME)
    frames = 1 + (len(audio) - FRAME) // HOP
    spec = np.stack([np.fft.rfft(window * audio[t * HOP : t * HOP + FRAME], NFFT)[:256] for t in range(frames)], axis=1)
    mag = np.abs(spec)
    sin = np.where(mag > 0, spec.imag / np.where(mag > 0, mag, 1), 0.0)
    cos = np.where(mag > 0, spec.real / np.where(mag > 0, mag, 1), 1.0)
    return np.stack([spec.real, spec.imag, sin, cos])


def subbands(x, n):
    c, f, t = x.shape
    return x.reshape(c, n, f // n, t).transpose(1, 0, 2, 3).reshape(n * c, f // n, t)


def recording(seconds, seed):
    rng = np.random.default_rng(seed)
    length = int(round(seconds * FS))
    k = np.arange(length)
    tau = (k % 1600) / FS
    chirp = np.sin(2 * np.pi * 0.5 * (8000 / 0.1) * tau**2)
    rir = rng.standard_normal(2400) * np.exp(-np.arange(2400) / 400.0)
    rir[:40] = 0.0
    rir[40] = 3.0
    audio = np.convolve(chirp, rir)[:length] * 0.1
    return audio.astype(np.float32)


def randomize(model, seed):
    g = torch.Generator().manual_seed(seed)
    with torch.no_grad():
        for name, p in model.named_parameters():
            if name.endswith("prelu.weight"):
                p.copy_(0.1 + 0.3 * torch.rand(p.shape, generator=g))
            elif ".norm." in name or ".bn." in name:
                base = 1.0 if name.endswith("weight") else 0.0
                p.copy_(base + 0.2 * (torch.rand(p.shape, generator=g) - 0.5))
            else:
                p.copy_((torch.rand(p.shape, generator=g) - 0.5) * 2 * p.detach().abs().max().clamp(min=0.05))
        for name, b in model.named_buffers():
            if name.endswith("running_mean"):
                b.copy_(0.2 * (torch.rand(b.shape, generator=g) - 0.5))
            elif name.endswith("running_var"):
                b.copy_(0.5 + torch.rand(b.shape, generator=g))
        model.head.bias.fill_(1.5)


def write_fanw(path, model, cfg, metadata):
    tensors, payload, offset = [], bytearray(), 0
    params = dict(model.named_parameters())
    for name, t in model.state_dict().items():
        if name.endswith("num_batches_tracked"):
            continue
        data = t.detach().to(torch.float32).contiguous().numpy()
        role = "parameter" if name in params else "buffer"
        # Single-layer nn.GRU suffixes its tensors with the layer index.
        name = name.replace("_l0", "") if name.startswith("gru.") else name
        tensors.append({"name": name, "offset": offset, "role": role, "shape": list(data.shape)})
        payload += data.astype("<f4").tobytes()
        offset += data.size * 4
    header = json.dumps({"config": cfg, "metadata": metadata, "tensors": tensors}, sort_keys=True, separators=(",", ":"))
    raw = header.encode()
    path.write_bytes(b"FANW" + struct.pack("<II", 1, len(raw)) + raw + bytes(payload))


def write_mltf(path, arrays, meta):
    tensors, payload, offset = [], bytearray(), 0
    for name, a in arrays:
        a = np.ascontiguousarray(a, dtype="<f4")
        # Single-layer nn.GRU suffixes its tensors with the layer index.
        name = name.replace("_l0", "") if name.startswith("gru.") else name
        tensors.append({"name": name, "offset": offset, "shape": list(a.shape)})
        payload += a.tobytes()
        offset += a.size * 4
    raw = json.dumps({"meta": meta, "tensors": tensors}, sort_keys=True, separators=(",", ":")).encode()
    path.write_bytes(b"MLTF" + struct.pack("<II", 1, len(raw)) + raw + bytes(payload))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=20260101)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    torch.manual_seed(args.seed)
    model = FaNet(CONFIG)
    randomize(model, args.seed)
    model.eval()
    # Round the weights to float32 first so both sides start from identical values.
    model = model.to(torch.float32)
    reference = FaNet(CONFIG).double().eval()
    reference.load_state_dict({k: v.double() for k, v in model.state_dict().items()})

    arrays = []
    for name, seconds, seed in (("t22", 0.2, 1), ("t47", 0.4, 2)):
        audio = recording(seconds, seed)
        x = subbands(features(audio.astype(np.float64)), CONFIG["subbands"]).astype(np.float32)
        with torch.no_grad():
            y = reference(torch.from_numpy(x.astype(np.float64))[None])[0].numpy()
        arrays += [(f"{name}.audio", audio), (f"{name}.input", x), (f"{name}.expected", y.astype(np.float32))]
        print(f"{name}: T={x.shape[-1]} outputs {np.round(y[:4], 4)} ...")

    write_fanw(out / "parity_weights.fanw", model, CONFIG, {"source": "make_parity_fixture.py", "seed": args.seed})
    write_mltf(out / "parity_fixture.mltf", arrays, {"generator": "make_parity_fixture.py", "seed": args.seed})


if __name__ == "__main__":
    main()
