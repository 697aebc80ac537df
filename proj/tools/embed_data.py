#!/usr/bin/env python3
"""Regenerates include/sparsemix/builtin_data.hpp from data/*.csv."""
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATASETS = ["iris", "crabs"]


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def main() -> None:
    out = [
        "#pragma once",
        "",
        "// Generated by tools/embed_data.py from data/*.csv. Do not edit.",
        "",
        "#include <cstdint>",
        "#include <string_view>",
        "",
        "namespace sparsemix::builtin_data {",
        "",
    ]
    for name in DATASETS:
        raw = (ROOT / "data" / f"{name}.csv").read_bytes()
        text = raw.decode("ascii")
        assert ')csv"' not in text
        out.append(f'inline constexpr std::string_view k_{name} = R"csv({text})csv";')
        out.append(f"inline constexpr std::uint64_t k_{name}_fnv1a = 0x{fnv1a64(raw):016x}ULL;")
        out.append("")
    out.append("}  // namespace sparsemix::builtin_data")
    (ROOT / "include" / "sparsemix" / "builtin_data.hpp").write_text("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
