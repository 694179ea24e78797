// (x, Γ(x)) pairs evaluated at 50 significant digits.
pub const GAMMA_REFERENCE: &[(f64, f64)] = &[
    (19.463774, 2.492011321913954e+16),
    (9.093408, 49269.80648592644),
    (39.073522, 6.840976174331578e+44),
    (4.392555, 10.033785269376473),
    (32.176126, 1.510531722818114e+34),
    (21.973051, 4.703729187835866e+19),
    (3.527036, 3.424374842029396),
    (30.470772, 4.366387432059254e+31),
    (2.297865, 1.1652196462339368),
    (26.047059, 1.8065758759240368e+25),
    (4.237833, 8.15278145341911),
    (5.488245, 51.36152498212582),
    (25.499925, 3.086025420563404e+24),
    (49.619785, 1.3817310774272696e+62),
    (7.471928, 1771.8352078093985),
    (13.433176, 1441329055.516004),
    (37.664622, 4.0878064793234296e+42),
    (56.865151, 4.1273940547217317e+74),
    (34.647322, 8.483787469693835e+37),
    (23.830994, 1.5171716656746667e+22),
    (58.576494, 4.2018020810099855e+77),
    (2.842632, 1.73832832630963),
    (51.515184, 2.299981607249127e+65),
    (17.412077, 66766682287595.52),
    (8.698092, 21242.221060807933),
    (7.111645, 888.2824331393838),
    (18.543485, 1699417011093435.0),
    (48.976775, 1.1343829044374225e+61),
    (10.884546, 2767707.53144403),
    (34.91693, 2.2001899382497733e+38),
    (38.352862, 4.953086781825911e+43),
    (22.375233, 1.6208658885738175e+20),
    (32.887281, 1.777611368277715e+35),
    (3.814199, 4.774830543403293),
    (3.62309, 3.8161071301964795),
    (12.397225, 106044846.94633925),
    (40.839978, 4.513906985328382e+47),
    (25.684159, 5.587875606616184e+24),
    (18.883123, 4553991889151906.0),
    (35.154434, 5.1027981062442256e+38),
    (27.218403, 8.257632869467084e+26),
    (18.021031, 377761396227616.3),
    (47.67305, 7.327565996678618e+58),
    (41.954716, 2.825969643805706e+49),
    (14.683586, 37533390601.00161),
    (34.486701, 4.813514844656235e+37),
    (31.53553, 1.6618330764083654e+33),
    (52.514493, 1.1816089445028889e+67),
    (43.780245, 2.6382735827145405e+52),
    (17.311869, 50304571104155.67),
    (58.811482, 1.0918474339467236e+78),
    (7.128043, 916.2586289881577),
    (25.116463, 9.007735800235789e+23),
    (45.440599, 1.418447550438801e+55),
    (9.161473, 57055.576180626456),
    (29.363338, 1.0321690507534384e+30),
    (2.400475, 1.242554708015673),
    (40.109541, 3.051722851524496e+46),
    (45.886023, 7.742794756532111e+55),
    (34.402905, 3.582517579183163e+37),
    (52.534895, 1.2808197422781385e+67),
    (18.859163, 4247195642008849.0),
    (41.732957, 1.2379742844403218e+49),
    (35.682474, 3.331262090264379e+39),
    (34.814717, 1.5326623911145281e+38),
    (27.39951, 1.4980678002507544e+27),
    (50.406068, 2.971352410644238e+63),
    (56.683632, 1.985913205830032e+74),
    (28.472195, 5.228657822744024e+28),
    (39.865925, 1.2462888079437214e+46),
    (3.687132, 4.108586687597634),
    (42.104447, 4.937275062254187e+49),
    (38.845375, 2.9751011851344725e+44),
    (59.586102, 2.5596412923789606e+79),
    (49.324391, 4.3774461121960573e+61),
    (17.111502, 28611596894415.945),
    (23.178197, 1.958995467753636e+21),
    (40.13573, 3.360422856559306e+46),
    (1.402648, 0.887122794152525),
    (27.728632, 4.435788265455893e+27),
    (-4.000941, -44.2164852887572),
    (-4.273537, -0.11354289344646445),
    (-4.584594, -0.05423958227080105),
    (-0.789954, -5.517888161794032),
    (-4.20803, -0.15664281988732917),
    (-3.575261, 0.2500689990441869),
    (-2.808419, -1.1701700726394715),
    (-0.237892, -5.084804644974265),
    (-4.46889, -0.06340098031391767),
    (-2.496847, -0.9486474491549259),
    (-1.960496, 13.156532845656999),
    (-0.173897, -6.533434219170903),
    (1.0, 1.0),
    (2.0, 1.0),
    (3.0, 2.0),
    (4.5, 11.631728396567448),
    (5.5, 52.34277778455352),
    (0.5, 1.772453850905516),
    (10.0, 362880.0),
    (25.25, 1.3821549138373968e+24),
];
