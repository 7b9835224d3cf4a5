"""Writes the map-file golden fixtures with an encoder independent of the C++ code."""
import struct

def write(path, kind, height, width, values):
    header = b"RFIR" + struct.pack("<BBH", 1, kind, 0) + struct.pack("<III", height, width, 2)
    payload = b"".join(struct.pack("<ff", x, y) for x, y in values)
    with open(path, "wb") as f:
        f.write(header + payload)

# 1x1 flow holding (3.5, -2).
write("flow_1x1.rfir", 0, 1, 1, [(3.5, -2.0)])

# 4x4 dvm, pixel (row r, col c) holds (0.25 * c - 0.5, -0.125 * r + 1.0).
write("dvm_4x4.rfir", 1, 4, 4,
      [(0.25 * c - 0.5, -0.125 * r + 1.0) for r in range(4) for c in range(4)])
