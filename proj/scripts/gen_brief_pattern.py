#!/usr/bin/env python3
"""Regenerates core/src/brief_pattern.inc.

256 point pairs drawn from SplitMix64 seeded with 42. Each pair consumes four
draws in the order ax, ay, bx, by; each coordinate is (draw % 31) - 15.
"""
import pathlib

MASK = (1 << 64) - 1


def splitmix64(state):
    while True:
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        yield z ^ (z >> 31)


def main():
    rng = splitmix64(42)
    lines = ["// Generated by scripts/gen_brief_pattern.py. Do not edit.",
             "// {ax, ay, bx, by}, SplitMix64(42), coordinate = draw % 31 - 15."]
    for _ in range(256):
        ax, ay, bx, by = (next(rng) % 31 - 15 for _ in range(4))
        lines.append(f"{{{ax}, {ay}, {bx}, {by}}},")
    out = pathlib.Path(__file__).resolve().parent.parent / "core" / "src" / "brief_pattern.inc"
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
