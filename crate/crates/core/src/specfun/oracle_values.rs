// generated once with mpmath at 40 digits; do not edit
const J0Y0J1Y1: [(f64, f64, f64, f64, f64); 20] = [
    (9.99999999999999955e-7, 0.99999999999975, -8.86903148165944373, 4.99999999999937477e-7, -6.36619772372175043e+5),
    (0.00100000000000000002, 0.999999750000015625, -4.47141661137592326, 0.000499999937500002615, -636.622167231139415),
    (0.100000000000000006, 0.997501562066040032, -1.53423865135036681, 0.0499375260362420003, -6.45895109470202664),
    (0.5, 0.938469807240812904, -0.444518733506706557, 0.242268457674873886, -1.47147239267024307),
    (0.89359999999999995, 0.810114561610914845, 2.02560721880376063e-5, 0.403661995806253947, -0.879398134030629482),
    (1.0, 0.765197686557966551, 0.088256964215676958, 0.440050585744933516, -0.781212821300288717),
    (2.0, 0.223890779141235668, 0.51037567264974512, 0.576724807756873387, -0.107032431540937547),
    (2.5, -0.0483837764681979963, 0.498070359615231888, 0.497094102464274038, 0.145918137966785799),
    (3.70000000000000018, -0.399230203371191115, 0.10607431532035411, 0.0538339877454617905, 0.416674372683807493),
    (4.90000000000000036, -0.209738327585326203, -0.292054594244014225, -0.314694671015190655, 0.181246692045048563),
    (5.0, -0.177596771314338304, -0.30851762524903378, -0.327579137591465222, 0.147863143391226845),
    (5.09999999999999964, -0.144334747060500636, -0.321602449124859422, -0.337097202018231813, 0.11373644197749973),
    (7.29999999999999982, 0.288216947635014399, 0.0627738863740375977, 0.0825704304932578311, -0.284594371868072108),
    (8.0, 0.171650807137553906, 0.223521489387566221, 0.234636346853914624, -0.158060461731247494),
    (12.5, 0.146884054700421102, -0.171214306844669287, -0.165483804614759718, -0.15383825653750118),
    (33.2999999999999972, 0.0633384859475212517, 0.122897499135037326, 0.123862147901480091, -0.061500722807785735),
    (99.9000000000000057, 0.0121804335169289782, -0.078893139943319797, -0.078833166324155769, -0.0125754367256524131),
    (250.0, -0.0260533734252042337, -0.0432168454403662677, -0.0432690384103307495, 0.0259669921854845823),
    (1234.5, -0.0135503796180357219, 0.0182229950474125516, 0.0182175083373924983, 0.0135577614471803344),
    (9876.5, 0.000945833684272814247, -0.00797266784177109165, -0.00797261996894808683, -0.000946237303559143277),
];
const JN: [(u32, f64, f64); 15] = [
    (2, 0.299999999999999989, 0.0111658619490639632),
    (2, 5.0, 0.0465651162777522155),
    (3, 0.000100000000000000005, 2.0833333320312503e-14),
    (5, 4.0, 0.132086656047098272),
    (5, 7.5, 0.283473905162550459),
    (10, 3.0, 1.29283516457158838e-5),
    (10, 20.0, 0.186482558023945083),
    (20, 15.0, 0.00736023407922348526),
    (20, 25.0, 0.0519940492283032318),
    (40, 38.0, 0.066862255678219314),
    (40, 60.0, -0.077646197404715065),
    (57, 63.0, 0.0909269955629963606),
    (60, 10.0, 6.9094332494399619e-41),
    (100, 80.0, 4.60655306482347735e-6),
    (150, 200.0, -0.031593559273458418),
];
const ZEROS: [(u32, usize, f64); 16] = [
    (0, 1, 2.40482555769577277),
    (0, 2, 5.52007811028631065),
    (0, 3, 8.65372791291101222),
    (0, 10, 30.6346064684319751),
    (1, 1, 3.83170597020751232),
    (1, 2, 7.01558666981561875),
    (1, 5, 16.4706300508776328),
    (2, 1, 5.13562230184068256),
    (2, 4, 14.7959517823512607),
    (5, 1, 8.77148381595995402),
    (5, 3, 15.700174079711671),
    (17, 1, 22.1724946188263262),
    (17, 2, 26.5597841380253869),
    (40, 1, 46.6484094982857364),
    (40, 2, 52.0161467794285456),
    (57, 1, 64.4101647086417915),
];
const Y0_FIRST_ZERO: f64 = 0.893576966279167522;
