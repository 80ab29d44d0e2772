"""Reference Bloch elements for Q(sqrt(-303)), as (coeff, a, b, den) rows.

Each row encodes coeff * [(a + b*omega)/den] with omega = (1+sqrt(-303))/2.
BETA_ALG has 110 terms of coefficient +-2 and regulator value R2/(2pi);
BETA_GEO is the tessellation element, with Dsig equal to 24 times the
volume of the PGL2(O)-quotient and equal to 22 times that of BETA_ALG.
"""

BETA_ALG = [
    (-2, 41, -1, 52), (-2, 2, -1, 6), (-2, -1, -1, 6), (-2, 92, -1, 64),
    (-2, 701, -1, 676), (-2, 12, -1, 8), (-2, 4, -1, 8), (-2, -3, -1, 1),
    (-2, 8, -1, 12), (-2, 12, -1, 16), (-2, 15, -1, 16), (-2, 2, -1, 16),
    (-2, -11, -1, 16), (-2, -25, -1, 2), (-2, 15, -1, 22), (-2, 26, -1, 22),
    (-2, 46, -3, 66), (-2, -14, -1, 22), (-2, 26, -1, 24), (-2, 2, -1, 26),
    (-2, 8, -1, 32), (-2, 25, -1, 32), (-2, 28, -1, 32), (-2, -4, -1, 32),
    (-2, 389, -1, 352), (-2, -36, -1, 352), (-2, 8, -1, 4), (-2, -7, -1, 4),
    (-2, 41, -1, 44), (-2, 8, -1, 48), (-2, 147, -15, 104), (-2, 21, -4, 13),
    (-2, 21, -4, 33), (-2, 172, -21, 352), (-2, 201, -21, 352), (-2, 211, -23, 256),
    (-2, 124, -23, 312), (-2, -611, -2457, 22528), (-2, 2321, -253, 6144), (-2, -495, -253, 3328),
    (-2, 535, -27, 676), (-2, 168, -27, 676), (-2, 535, -27, 832), (-2, 1332, -29, 1331),
    (-2, 149, -29, 484), (-2, 84, -3, 64), (-2, 45, -3, 88), (-2, 46, -3, 88),
    (-2, -9, -3, 11), (-2, 36, -3, 16), (-2, 45, -3, 22), (-2, 46, -3, 22),
    (-2, -20, -3, 22), (-2, -21, -3, 22), (-2, -17, -3, 256), (-2, 15, -3, 32),
    (-2, 24, -3, 44), (-2, -221, -39, 512), (-2, 31, -8, 39), (-2, 3807, -51, 3328),
    (-2, 63, -12, 143), (-2, 17, -9, 26), (2, 11, 1, 8), (2, 3, 1, 8),
    (2, -4, 1, 8), (2, 25, 1, 1), (2, 14, 1, 11), (2, 7, 1, 12),
    (2, 11, 1, 16), (2, 14, 1, 16), (2, 1, 1, 16), (2, 4, 1, 16),
    (2, -25, 1, 16), (2, 14, 1, 22), (2, 25, 1, 24), (2, -2, 1, 24),
    (2, 14, 1, 26), (2, -2, 1, 3), (2, 4, 1, 32), (2, 7, 1, 4),
    (2, -4, 1, 4), (2, 11, 1, 48), (2, 7, 1, 48), (2, 132, 15, 104),
    (2, 204, 15, 176), (2, -3, 21, 169), (2, 151, 21, 352), (2, 180, 21, 352),
    (2, 45, 23, 256), (2, -51, 27, 484), (2, 335, 29, 512), (2, -1, 29, 176),
    (2, -123, 3, 121), (2, 33, 3, 13), (2, 33, 3, 16), (2, 43, 3, 22),
    (2, 3, 3, 26), (2, 12, 3, 32), (2, 17, 3, 32), (2, 20, 3, 32),
    (2, 20, 3, 44), (2, 2651, 33, 5408), (2, 23, 8, 39), (2, 16348, 6399, 42592),
    (2, -67, 7, 64), (2, -1, 7, 66), (2, 181, 7, 312), (2, 60, 9, 52),
    (2, 8, 9, 26), (2, 8, 9, 44),
]

BETA_GEO = [
    (108, 4, 1, 6), (36, 3, 1, 5), (108, 11, 1, 13), (36, 1, 1, 5),
    (64, 3, 1, 4), (24, 14, 1, 26), (12, -3, 3, 35), (36, 0, 3, 38),
    (64, 0, 1, 4), (180, 3, 1, 8), (12, -4, 1, 22), (24, 36, 1, 32),
    (88, 5, 1, 10), (36, 192, 21, 689), (24, -4, 1, 8), (136, 17, 3, 32),
    (180, 3, 1, 11), (12, 44, 5, 104), (30, 45, 9, 106), (12, -6, 1, 2),
    (88, 23, 5, 48), (20, -25, 5, 3), (12, 38, 9, 38), (12, 19, 1, 20),
    (48, 4, 1, 24), (24, -25, 5, 128), (24, 148, 5, 128), (60, 24, 1, 26),
    (24, 665, 42, 1121), (24, 95, 6, 77), (12, 17, 2, 33), (12, -1, 1, 3),
    (48, -1, 1, 19), (24, -28, 7, 55), (48, 644, 35, 984), (24, 24, 4, 59),
    (12, -28, 4, 7), (24, 76, 7, 55), (48, -28, 7, 40), (60, 3, 1, 7),
    (12, -5, 1, 7), (24, -25, 5, 56), (24, 11, 1, 9), (24, 99, 9, 208),
    (60, 8, 4, 41), (24, -4, 15, 26), (36, 27, 1, 26), (36, 27, 1, 32),
    (12, 10, 2, 53), (12, 41, 2, 45), (12, 75, 1, 76), (6, 5, 1, 5),
    (6, 0, 5, 81), (12, 1123, 25, 1298), (12, 66, 11, 118), (60, 29, 4, 41),
    (24, 15, 15, 26), (28, -28, 5, 1272), (12, 1175, 25, 1166), (12, 5, 1, 3),
    (72, 6, 3, 41), (24, 440, 35, 1007), (24, 20, 3, 104), (24, 58, 1, 54),
    (24, 522, 9, 583), (24, 20, 3, 11), (12, 37, 1, 39), (12, 19, 6, 247),
    (12, 980, 15, 902), (12, 7, 1, 10), (24, -6, 3, 13), (24, 57, 3, 76),
    (24, 36, 1, 44), (12, 76, 1, 78), (12, 27, 27, 130), (16, -21, 3, 20),
    (28, 18, 3, 59), (48, 67, 5, 82), (28, 1370, 15, 1298), (28, 6, 1, 10),
    (72, 32, 3, 41), (12, 57, 8, 209), (12, 2, 1, 3), (24, 2, 1, 7),
    (12, 64, 7, 78), (12, 133, 16, 53), (36, 15, 3, 53), (24, 4, 1, 7),
    (48, 2, 2, 39), (12, -1, 1, 2), (12, 684, 18, 779), (12, -72, 9, 308),
    (12, 7, 1, 7), (48, 1, 1, 4), (24, 1600, 175, 4134), (30, 52, 9, 106),
    (6, 867, 25, 792), (24, 64, 7, 50), (24, 1876, 36, 2173), (24, 40, 1, 44),
    (24, 20, 3, 14), (24, 3, 1, 44), (24, 137, 7, 123), (6, -28, 27, 26),
    (6, 79, 1, 82), (12, 55, 9, 118), (12, 155, 16, 779), (28, 6, 1, 6),
    (4, 17, 3, 5), (16, 627, 30, 1007), (24, -24, 4, 9), (12, 1480, 84, 2173),
    (24, -36, 9, 28), (12, 988, 27, 826), (12, 69, 7, 76), (24, -28, 7, 198),
    (12, 151, 21, 130), (12, 84, 1, 88), (6, 331, 81, 574), (12, 113, 9, 104),
    (24, 31, 4, 59), (16, 40, 11, 106), (8, -765, 165, 11236), (8, -51, 11, 15),
    (36, 476, 21, 689), (28, 274, 3, 295), (28, 30, 5, 59), (12, -54, 9, 7),
    (8, -20, 5, 9), (8, -36, 9, 440), (4, -4, 1, 15), (4, 95, 5, 152),
    (4, 35, 3, 50), (4, 19, 1, 25), (16, 209, 10, 159), (20, -5, 1, 160),
    (28, 5, 1, 265), (-12, 0, -3, 35), (-12, -3, -1, 22), (-12, 49, -5, 104),
    (-12, -5, -1, 2), (-12, 47, -9, 38), (-12, 20, -1, 20), (-12, 19, -2, 33),
    (-12, 0, -1, 3), (-12, -24, -4, 7), (-12, -4, -1, 7), (-12, 12, -2, 53),
    (-12, 43, -2, 45), (-6, 6, -1, 5), (-6, 5, -5, 81), (-12, 1148, -25, 1298),
    (-12, 77, -11, 118), (-12, 1200, -25, 1166), (-12, 6, -1, 3), (-12, 38, -1, 39),
    (-12, 25, -6, 247), (-12, 995, -15, 902), (-12, 8, -1, 10), (-12, 77, -1, 78),
    (-12, 54, -27, 130), (-16, -18, -3, 20), (-12, 65, -8, 209), (-12, 3, -1, 3),
    (-12, 71, -7, 78), (-12, 149, -16, 53), (-12, 0, -1, 2), (-12, 702, -18, 779),
    (-12, -63, -9, 308), (-12, 8, -1, 7), (-6, 892, -25, 792), (-6, -1, -27, 26),
    (-6, 80, -1, 82), (-12, 64, -9, 118), (-12, 171, -16, 779), (-4, 20, -3, 5),
    (-12, 1564, -84, 2173), (-12, 1015, -27, 826), (-12, 76, -7, 76), (-12, 172, -21, 130),
    (-12, 85, -1, 88), (-6, 412, -81, 574), (-12, 122, -9, 104), (-12, -45, -9, 7),
    (-4, -3, -1, 15), (-4, 100, -5, 152), (-4, 38, -3, 50), (-4, 20, -1, 25),
]
