"""Reference rate tables at p = 1e-3 as printed, one string per cell.

Keys are (table, q).  Row layouts follow the emitter columns named in
``COLUMNS``; only these columns are compared.
"""

COLUMNS = {
    "iceberg_rates": ["p_U (1e-3)", "p_S (%) n_a=0", "p_S (%) n_a=1", "p_L/p_S (1e-3) n_a=0",
                      "p_L/p_S (1e-3) n_a=1", "ratio n_a=0", "ratio n_a=1"],
    "d3_rates": ["p_U (1e-3)", "p_S (%)", "p_L/p_S (1e-3)", "ratio"],
    "hamming_rates": ["logical", "w", "t", "p_U (1e-3)", "p_S (%)", "p_L/p_S (1e-3)", "ratio"],
}

REFERENCE = {
    ("iceberg_rates", 1e-3): [
        ["7", "99.52", "99.24", "2.21", "1.41", "3.17", "4.96"],
        ["11", "99.20", "98.87", "3.02", "1.69", "3.64", "6.53"],
        ["15", "98.88", "98.50", "3.84", "1.96", "3.90", "7.64"],
    ],
    ("iceberg_rates", 1e-4): [
        ["6.1", "99.52", "99.24", "1.31", "0.50", "4.67", "12.11"],
        ["10.1", "99.20", "98.87", "2.12", "0.78", "4.77", "13.02"],
        ["14.1", "98.88", "98.50", "2.93", "1.05", "4.81", "13.44"],
    ],
    ("d3_rates", 1e-3): [
        ["3", "99.01", "1.14", "2.62"],
        ["5", "98.41", "1.15", "4.34"],
        ["7", "97.81", "1.16", "6.04"],
        ["9", "97.21", "1.17", "7.72"],
    ],
    ("d3_rates", 1e-4): [
        ["2.1", "99.01", "0.236", "8.91"],
        ["4.1", "98.41", "0.237", "17.29"],
        ["6.1", "97.81", "0.239", "25.57"],
        ["8.1", "97.21", "0.240", "33.75"],
    ],
    ("hamming_rates", 1e-3): [
        ["Z4Z5Z6Z7", "4", "4", "7", "99.41", "1.14", "6.14"],
        ["Z1Z2", "2", "6", "3", "99.01", "1.14", "2.62"],
        ["Z5Z6Z7", "3", "7", "5", "98.81", "1.15", "4.36"],
        ["Z2Z3Z4Z5", "4", "8", "7", "98.61", "1.15", "6.09"],
        ["Z1Z2Z3Z4Z5", "5", "9", "9", "98.41", "1.15", "7.82"],
        ["Z1Z2Z3Z5Z6Z7", "6", "10", "11", "98.21", "1.15", "9.53"],
        ["Z1Z2Z3", "3", "11", "5", "98.01", "1.16", "4.32"],
        ["Z1Z2Z3Z4", "4", "12", "7", "97.81", "1.16", "6.04"],
    ],
    ("hamming_rates", 1e-4): [
        ["Z4Z5Z6Z7", "4", "4", "6.1", "99.41", "0.23", "25.99"],
        ["Z1Z2", "2", "6", "2.1", "99.01", "0.24", "8.91"],
        ["Z5Z6Z7", "3", "7", "4.1", "98.81", "0.24", "17.36"],
        ["Z2Z3Z4Z5", "4", "8", "6.1", "98.61", "0.24", "25.78"],
        ["Z1Z2Z3Z4Z5", "5", "9", "8.1", "98.41", "0.24", "34.16"],
        ["Z1Z2Z3Z5Z6Z7", "6", "10", "10.1", "98.21", "0.24", "42.51"],
        ["Z1Z2Z3", "3", "11", "4.1", "98.01", "0.24", "17.22"],
        ["Z1Z2Z3Z4", "4", "12", "6.1", "97.81", "0.24", "25.57"],
    ],
}

# Printed cells that contradict the first-order formula they were derived
# from: (table, q, row, column) -> value the formula gives.  With G = 16
# and l = 14, 1 - 16p + (14/15)p = 0.984933...; the printed p_L/p_S and
# ratio in the same row are consistent with l = 14.
INCONSISTENT = {
    ("iceberg_rates", 1e-3, 2, "p_S (%) n_a=1"): "98.49",
    ("iceberg_rates", 1e-4, 2, "p_S (%) n_a=1"): "98.49",
}


def reference_cells():
    for (table, q), rows in REFERENCE.items():
        for r, row in enumerate(rows):
            for col, val in zip(COLUMNS[table], row):
                yield table, q, r, col, val
