//! Order-one Bessel functions, fdlibm rational approximations.
//!
//! |x| < 2: J1 = x/2 + x z R/S and Y1 = x U/V + (2/pi)(J1 ln x - 1/x), z = x².
//! |x| ≥ 2: amplitude/phase form with pone/qone fitted on four intervals of 1/x.

use super::{sincos_shifted, SQRT_2_OVER_PI};

const TPI: f64 = std::f64::consts::FRAC_2_PI;

const R0: [f64; 4] = [
    -6.25000000000000000000e-02,
    1.40705666955189706048e-03,
    -1.59955631084035597520e-05,
    4.96727999609584448412e-08,
];
const S0: [f64; 5] = [
    1.91537599538363460805e-02,
    1.85946785588630915560e-04,
    1.17718464042623683263e-06,
    5.04636257076217042715e-09,
    1.23542274426137913908e-11,
];

const U0: [f64; 5] = [
    -1.96057090646238940668e-01,
    5.04438716639811282616e-02,
    -1.91256895875763547298e-03,
    2.35252600561610495928e-05,
    -9.19099158039878874504e-08,
];
const V0: [f64; 5] = [
    1.99167318236649903973e-02,
    2.02552581025135171496e-04,
    1.35608801097516229404e-06,
    6.22741452364621501295e-09,
    1.66559246207992079114e-11,
];

const PR8: [f64; 6] = [
    0.0,
    1.17187499999988647970e-01,
    1.32394806593073575129e+01,
    4.12051854307378562225e+02,
    3.87474538913960532227e+03,
    7.91447954031891731574e+03,
];
const PS8: [f64; 5] = [
    1.14207370375678408436e+02,
    3.65093083420853463394e+03,
    3.69562060269033463555e+04,
    9.76027935934950801311e+04,
    3.08042720627888811578e+04,
];
const PR5: [f64; 6] = [
    1.31990519556243522749e-11,
    1.17187493190614097638e-01,
    6.80275127868432871736e+00,
    1.08308182990189109773e+02,
    5.17636139533199752805e+02,
    5.28715201363337541807e+02,
];
const PS5: [f64; 5] = [
    5.92805987221131331921e+01,
    9.91401418733614377743e+02,
    5.35326695291487976647e+03,
    7.84469031749551231769e+03,
    1.50404688810361062679e+03,
];
const PR3: [f64; 6] = [
    3.02503916137373618024e-09,
    1.17186865567253592491e-01,
    3.93297750033315640650e+00,
    3.51194035591636932736e+01,
    9.10550110750781271918e+01,
    4.85590685197364919645e+01,
];
const PS3: [f64; 5] = [
    3.47913095001251519989e+01,
    3.36762458747825746741e+02,
    1.04687139975775130551e+03,
    8.90811346398256432622e+02,
    1.03787932439639277504e+02,
];
const PR2: [f64; 6] = [
    1.07710830106873743082e-07,
    1.17176219462683348094e-01,
    2.36851496667608785174e+00,
    1.22426109148261232917e+01,
    1.76939711271687727390e+01,
    5.07352312588818499250e+00,
];
const PS2: [f64; 5] = [
    2.14364859363821409488e+01,
    1.25290227168402751090e+02,
    2.32276469057162813669e+02,
    1.17679373287147100768e+02,
    8.36463893371618283368e+00,
];

const QR8: [f64; 6] = [
    0.0,
    -1.02539062499992714161e-01,
    -1.62717534544589987888e+01,
    -7.59601722513950107896e+02,
    -1.18498066702429587167e+04,
    -4.84385124285750353010e+04,
];
const QS8: [f64; 6] = [
    1.61395369700722909556e+02,
    7.82538599923348465381e+03,
    1.33875336287249578163e+05,
    7.19657723683240939863e+05,
    6.66601232617776375264e+05,
    -2.94490264303834643215e+05,
];
const QR5: [f64; 6] = [
    -2.08979931141764104297e-11,
    -1.02539050241375426231e-01,
    -8.05644828123936029840e+00,
    -1.83669607474888380239e+02,
    -1.37319376065508163265e+03,
    -2.61244440453215656817e+03,
];
const QS5: [f64; 6] = [
    8.12765501384335777857e+01,
    1.99179873460485964642e+03,
    1.74684851924908907677e+04,
    4.98514270910352279316e+04,
    2.79480751638918118260e+04,
    -4.71918354795128470869e+03,
];
const QR3: [f64; 6] = [
    -5.07831226461766561369e-09,
    -1.02537829820837089745e-01,
    -4.61011581139473403113e+00,
    -5.78472216562783643212e+01,
    -2.28244540737631695038e+02,
    -2.19210128478909325622e+02,
];
const QS3: [f64; 6] = [
    4.76651550323729509273e+01,
    6.73865112676699709482e+02,
    3.38015286679526343505e+03,
    5.54772909720722782367e+03,
    1.90311919338810798763e+03,
    -1.35201191444307340817e+02,
];
const QR2: [f64; 6] = [
    -1.78381727510958865572e-07,
    -1.02517042607985553460e-01,
    -2.75220568278187460720e+00,
    -1.96636162643703720221e+01,
    -4.23253133372830490089e+01,
    -2.13719211703704061733e+01,
];
const QS2: [f64; 6] = [
    2.95333629060523854548e+01,
    2.52981549982190529136e+02,
    7.57502834868645436472e+02,
    7.39393205320467245656e+02,
    1.55949003336666123687e+02,
    -4.95949898822628210127e+00,
];

// interval breakpoints of the fdlibm tables (high words 0x40200000, 0x40122E8B, 0x4006DB6D)
const BREAK_8: f64 = 8.0;
const BREAK_5: f64 = f64::from_bits(0x4012_2E8B_0000_0000);
const BREAK_3: f64 = f64::from_bits(0x4006_DB6D_0000_0000);

/// Ascending-power polynomial c0 + c1 z + ...
#[inline]
fn horner_up(z: f64, c: &[f64]) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * z + v)
}

#[inline]
fn pone(x: f64) -> f64 {
    let (p, q) = if x >= BREAK_8 {
        (&PR8, &PS8)
    } else if x >= BREAK_5 {
        (&PR5, &PS5)
    } else if x >= BREAK_3 {
        (&PR3, &PS3)
    } else {
        (&PR2, &PS2)
    };
    let z = 1.0 / (x * x);
    1.0 + horner_up(z, p) / (1.0 + z * horner_up(z, q))
}

#[inline]
fn qone(x: f64) -> f64 {
    let (p, q) = if x >= BREAK_8 {
        (&QR8, &QS8)
    } else if x >= BREAK_5 {
        (&QR5, &QS5)
    } else if x >= BREAK_3 {
        (&QR3, &QS3)
    } else {
        (&QR2, &QS2)
    };
    let z = 1.0 / (x * x);
    (0.375 + horner_up(z, p) / (1.0 + z * horner_up(z, q))) / x
}

pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    if !ax.is_finite() {
        return if ax.is_nan() { ax } else { 0.0 };
    }
    let v = if ax >= 2.0 {
        let (s, c) = sincos_shifted(ax, 3);
        (pone(ax) * c - qone(ax) * s) * SQRT_2_OVER_PI / ax.sqrt()
    } else {
        let z = ax * ax;
        let r = z * horner_up(z, &R0);
        let s = 1.0 + z * horner_up(z, &S0);
        (0.5 + r / s) * ax
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Y1 for x > 0; -inf at 0 and NaN for negative arguments.
pub fn y1(x: f64) -> f64 {
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    if x < 0.0 || x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x >= 2.0 {
        let (s, c) = sincos_shifted(x, 3);
        return (pone(x) * s + qone(x) * c) * SQRT_2_OVER_PI / x.sqrt();
    }
    if x < 5.551115123125783e-17 {
        return -TPI / x;
    }
    let z = x * x;
    let u = horner_up(z, &U0);
    let v = 1.0 + z * horner_up(z, &V0);
    x * (u / v) + TPI * (j1(x) * x.ln() - 1.0 / x)
}
