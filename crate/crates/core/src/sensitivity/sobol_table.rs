// Primitive polynomials and initial direction numbers for the first 128
// dimensions of the Joe-Kuo new-joe-kuo-6.21201 table. Dimension 0 is the
// van der Corput sequence. `poly` stores the polynomial with both the leading
// and the constant coefficient bits set; `init` holds m_1..m_s.

pub(crate) struct DirectionSeed {
    pub poly: u32,
    pub init: &'static [u32],
}

pub(crate) const MAX_DIMENSIONS: usize = 128;

pub(crate) static SEEDS: [DirectionSeed; 128] = [
    DirectionSeed { poly: 1, init: &[1] },
    DirectionSeed { poly: 3, init: &[1] },
    DirectionSeed { poly: 7, init: &[1, 3] },
    DirectionSeed { poly: 11, init: &[1, 3, 1] },
    DirectionSeed { poly: 13, init: &[1, 1, 1] },
    DirectionSeed { poly: 19, init: &[1, 1, 3, 3] },
    DirectionSeed { poly: 25, init: &[1, 3, 5, 13] },
    DirectionSeed { poly: 37, init: &[1, 1, 5, 5, 17] },
    DirectionSeed { poly: 41, init: &[1, 1, 5, 5, 5] },
    DirectionSeed { poly: 47, init: &[1, 1, 7, 11, 19] },
    DirectionSeed { poly: 55, init: &[1, 1, 5, 1, 1] },
    DirectionSeed { poly: 59, init: &[1, 1, 1, 3, 11] },
    DirectionSeed { poly: 61, init: &[1, 3, 5, 5, 31] },
    DirectionSeed { poly: 67, init: &[1, 3, 3, 9, 7, 49] },
    DirectionSeed { poly: 91, init: &[1, 1, 1, 15, 21, 21] },
    DirectionSeed { poly: 97, init: &[1, 3, 1, 13, 27, 49] },
    DirectionSeed { poly: 103, init: &[1, 1, 1, 15, 7, 5] },
    DirectionSeed { poly: 109, init: &[1, 3, 1, 15, 13, 25] },
    DirectionSeed { poly: 115, init: &[1, 1, 5, 5, 19, 61] },
    DirectionSeed { poly: 131, init: &[1, 3, 7, 11, 23, 15, 103] },
    DirectionSeed { poly: 137, init: &[1, 3, 7, 13, 13, 15, 69] },
    DirectionSeed { poly: 143, init: &[1, 1, 3, 13, 7, 35, 63] },
    DirectionSeed { poly: 145, init: &[1, 3, 5, 9, 1, 25, 53] },
    DirectionSeed { poly: 157, init: &[1, 3, 1, 13, 9, 35, 107] },
    DirectionSeed { poly: 167, init: &[1, 3, 1, 5, 27, 61, 31] },
    DirectionSeed { poly: 171, init: &[1, 1, 5, 11, 19, 41, 61] },
    DirectionSeed { poly: 185, init: &[1, 3, 5, 3, 3, 13, 69] },
    DirectionSeed { poly: 191, init: &[1, 1, 7, 13, 1, 19, 1] },
    DirectionSeed { poly: 193, init: &[1, 3, 7, 5, 13, 19, 59] },
    DirectionSeed { poly: 203, init: &[1, 1, 3, 9, 25, 29, 41] },
    DirectionSeed { poly: 211, init: &[1, 3, 5, 13, 23, 1, 55] },
    DirectionSeed { poly: 213, init: &[1, 3, 7, 3, 13, 59, 17] },
    DirectionSeed { poly: 229, init: &[1, 3, 1, 3, 5, 53, 69] },
    DirectionSeed { poly: 239, init: &[1, 1, 5, 5, 23, 33, 13] },
    DirectionSeed { poly: 241, init: &[1, 1, 7, 7, 1, 61, 123] },
    DirectionSeed { poly: 247, init: &[1, 1, 7, 9, 13, 61, 49] },
    DirectionSeed { poly: 253, init: &[1, 3, 3, 5, 3, 55, 33] },
    DirectionSeed { poly: 285, init: &[1, 3, 1, 15, 31, 13, 49, 245] },
    DirectionSeed { poly: 299, init: &[1, 3, 5, 15, 31, 59, 63, 97] },
    DirectionSeed { poly: 301, init: &[1, 3, 1, 11, 11, 11, 77, 249] },
    DirectionSeed { poly: 333, init: &[1, 3, 1, 11, 27, 43, 71, 9] },
    DirectionSeed { poly: 351, init: &[1, 1, 7, 15, 21, 11, 81, 45] },
    DirectionSeed { poly: 355, init: &[1, 3, 7, 3, 25, 31, 65, 79] },
    DirectionSeed { poly: 357, init: &[1, 3, 1, 1, 19, 11, 3, 205] },
    DirectionSeed { poly: 361, init: &[1, 1, 5, 9, 19, 21, 29, 157] },
    DirectionSeed { poly: 369, init: &[1, 3, 7, 11, 1, 33, 89, 185] },
    DirectionSeed { poly: 391, init: &[1, 3, 3, 3, 15, 9, 79, 71] },
    DirectionSeed { poly: 397, init: &[1, 3, 7, 11, 15, 39, 119, 27] },
    DirectionSeed { poly: 425, init: &[1, 1, 3, 1, 11, 31, 97, 225] },
    DirectionSeed { poly: 451, init: &[1, 1, 1, 3, 23, 43, 57, 177] },
    DirectionSeed { poly: 463, init: &[1, 3, 7, 7, 17, 17, 37, 71] },
    DirectionSeed { poly: 487, init: &[1, 3, 1, 5, 27, 63, 123, 213] },
    DirectionSeed { poly: 501, init: &[1, 1, 3, 5, 11, 43, 53, 133] },
    DirectionSeed { poly: 529, init: &[1, 3, 5, 5, 29, 17, 47, 173, 479] },
    DirectionSeed { poly: 539, init: &[1, 3, 3, 11, 3, 1, 109, 9, 69] },
    DirectionSeed { poly: 545, init: &[1, 1, 1, 5, 17, 39, 23, 5, 343] },
    DirectionSeed { poly: 557, init: &[1, 3, 1, 5, 25, 15, 31, 103, 499] },
    DirectionSeed { poly: 563, init: &[1, 1, 1, 11, 11, 17, 63, 105, 183] },
    DirectionSeed { poly: 601, init: &[1, 1, 5, 11, 9, 29, 97, 231, 363] },
    DirectionSeed { poly: 607, init: &[1, 1, 5, 15, 19, 45, 41, 7, 383] },
    DirectionSeed { poly: 617, init: &[1, 3, 7, 7, 31, 19, 83, 137, 221] },
    DirectionSeed { poly: 623, init: &[1, 1, 1, 3, 23, 15, 111, 223, 83] },
    DirectionSeed { poly: 631, init: &[1, 1, 5, 13, 31, 15, 55, 25, 161] },
    DirectionSeed { poly: 637, init: &[1, 1, 3, 13, 25, 47, 39, 87, 257] },
    DirectionSeed { poly: 647, init: &[1, 1, 1, 11, 21, 53, 125, 249, 293] },
    DirectionSeed { poly: 661, init: &[1, 1, 7, 11, 11, 7, 57, 79, 323] },
    DirectionSeed { poly: 675, init: &[1, 1, 5, 5, 17, 13, 81, 3, 131] },
    DirectionSeed { poly: 677, init: &[1, 1, 7, 13, 23, 7, 65, 251, 475] },
    DirectionSeed { poly: 687, init: &[1, 3, 5, 1, 9, 43, 3, 149, 11] },
    DirectionSeed { poly: 695, init: &[1, 1, 3, 13, 31, 13, 13, 255, 487] },
    DirectionSeed { poly: 701, init: &[1, 3, 3, 1, 5, 63, 89, 91, 127] },
    DirectionSeed { poly: 719, init: &[1, 1, 3, 3, 1, 19, 123, 127, 237] },
    DirectionSeed { poly: 721, init: &[1, 1, 5, 7, 23, 31, 37, 243, 289] },
    DirectionSeed { poly: 731, init: &[1, 1, 5, 11, 17, 53, 117, 183, 491] },
    DirectionSeed { poly: 757, init: &[1, 1, 1, 5, 1, 13, 13, 209, 345] },
    DirectionSeed { poly: 761, init: &[1, 1, 3, 15, 1, 57, 115, 7, 33] },
    DirectionSeed { poly: 787, init: &[1, 3, 1, 11, 7, 43, 81, 207, 175] },
    DirectionSeed { poly: 789, init: &[1, 3, 1, 1, 15, 27, 63, 255, 49] },
    DirectionSeed { poly: 799, init: &[1, 3, 5, 3, 27, 61, 105, 171, 305] },
    DirectionSeed { poly: 803, init: &[1, 1, 5, 3, 1, 3, 57, 249, 149] },
    DirectionSeed { poly: 817, init: &[1, 1, 3, 5, 5, 57, 15, 13, 159] },
    DirectionSeed { poly: 827, init: &[1, 1, 1, 11, 7, 11, 105, 141, 225] },
    DirectionSeed { poly: 847, init: &[1, 3, 3, 5, 27, 59, 121, 101, 271] },
    DirectionSeed { poly: 859, init: &[1, 3, 5, 9, 11, 49, 51, 59, 115] },
    DirectionSeed { poly: 865, init: &[1, 1, 7, 1, 23, 45, 125, 71, 419] },
    DirectionSeed { poly: 875, init: &[1, 1, 3, 5, 23, 5, 105, 109, 75] },
    DirectionSeed { poly: 877, init: &[1, 1, 7, 15, 7, 11, 67, 121, 453] },
    DirectionSeed { poly: 883, init: &[1, 3, 7, 3, 9, 13, 31, 27, 449] },
    DirectionSeed { poly: 895, init: &[1, 3, 1, 15, 19, 39, 39, 89, 15] },
    DirectionSeed { poly: 901, init: &[1, 1, 1, 1, 1, 33, 73, 145, 379] },
    DirectionSeed { poly: 911, init: &[1, 3, 1, 15, 15, 43, 29, 13, 483] },
    DirectionSeed { poly: 949, init: &[1, 1, 7, 3, 19, 27, 85, 131, 431] },
    DirectionSeed { poly: 953, init: &[1, 3, 3, 3, 5, 35, 23, 195, 349] },
    DirectionSeed { poly: 967, init: &[1, 3, 3, 7, 9, 27, 39, 59, 297] },
    DirectionSeed { poly: 971, init: &[1, 1, 3, 9, 11, 17, 13, 241, 157] },
    DirectionSeed { poly: 973, init: &[1, 3, 7, 15, 25, 57, 33, 189, 213] },
    DirectionSeed { poly: 981, init: &[1, 1, 7, 1, 9, 55, 73, 83, 217] },
    DirectionSeed { poly: 985, init: &[1, 3, 3, 13, 19, 27, 23, 113, 249] },
    DirectionSeed { poly: 995, init: &[1, 3, 5, 3, 23, 43, 3, 253, 479] },
    DirectionSeed { poly: 1001, init: &[1, 1, 5, 5, 11, 5, 45, 117, 217] },
    DirectionSeed { poly: 1019, init: &[1, 3, 3, 7, 29, 37, 33, 123, 147] },
    DirectionSeed { poly: 1033, init: &[1, 3, 1, 15, 5, 5, 37, 227, 223, 459] },
    DirectionSeed { poly: 1051, init: &[1, 1, 7, 5, 5, 39, 63, 255, 135, 487] },
    DirectionSeed { poly: 1063, init: &[1, 3, 1, 7, 9, 7, 87, 249, 217, 599] },
    DirectionSeed { poly: 1069, init: &[1, 1, 3, 13, 9, 47, 7, 225, 363, 247] },
    DirectionSeed { poly: 1125, init: &[1, 3, 7, 13, 19, 13, 9, 67, 9, 737] },
    DirectionSeed { poly: 1135, init: &[1, 3, 5, 5, 19, 59, 7, 41, 319, 677] },
    DirectionSeed { poly: 1153, init: &[1, 1, 5, 3, 31, 63, 15, 43, 207, 789] },
    DirectionSeed { poly: 1163, init: &[1, 1, 7, 9, 13, 39, 3, 47, 497, 169] },
    DirectionSeed { poly: 1221, init: &[1, 3, 1, 7, 21, 17, 97, 19, 415, 905] },
    DirectionSeed { poly: 1239, init: &[1, 3, 7, 1, 3, 31, 71, 111, 165, 127] },
    DirectionSeed { poly: 1255, init: &[1, 1, 5, 11, 1, 61, 83, 119, 203, 847] },
    DirectionSeed { poly: 1267, init: &[1, 3, 3, 13, 9, 61, 19, 97, 47, 35] },
    DirectionSeed { poly: 1279, init: &[1, 1, 7, 7, 15, 29, 63, 95, 417, 469] },
    DirectionSeed { poly: 1293, init: &[1, 3, 1, 9, 25, 9, 71, 57, 213, 385] },
    DirectionSeed { poly: 1305, init: &[1, 3, 5, 13, 31, 47, 101, 57, 39, 341] },
    DirectionSeed { poly: 1315, init: &[1, 1, 3, 3, 31, 57, 125, 173, 365, 551] },
    DirectionSeed { poly: 1329, init: &[1, 3, 7, 1, 13, 57, 67, 157, 451, 707] },
    DirectionSeed { poly: 1341, init: &[1, 1, 1, 7, 21, 13, 105, 89, 429, 965] },
    DirectionSeed { poly: 1347, init: &[1, 1, 5, 9, 17, 51, 45, 119, 157, 141] },
    DirectionSeed { poly: 1367, init: &[1, 3, 7, 7, 13, 45, 91, 9, 129, 741] },
    DirectionSeed { poly: 1387, init: &[1, 3, 7, 1, 23, 57, 67, 141, 151, 571] },
    DirectionSeed { poly: 1413, init: &[1, 1, 3, 11, 17, 47, 93, 107, 375, 157] },
    DirectionSeed { poly: 1423, init: &[1, 3, 3, 5, 11, 21, 43, 51, 169, 915] },
    DirectionSeed { poly: 1431, init: &[1, 1, 5, 3, 15, 55, 101, 67, 455, 625] },
    DirectionSeed { poly: 1441, init: &[1, 3, 5, 9, 1, 23, 29, 47, 345, 595] },
    DirectionSeed { poly: 1479, init: &[1, 3, 7, 7, 5, 49, 29, 155, 323, 589] },
    DirectionSeed { poly: 1509, init: &[1, 3, 3, 7, 5, 41, 127, 61, 261, 717] },
];
