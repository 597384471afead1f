//! Daubechies extremal-phase filter bank and the wavelet configuration.

use serde::{Deserialize, Serialize};

use crate::error::{MwwError, Result};

/// Largest supported number of vanishing moments.
pub const MAX_ORDER: usize = 10;

/// Fourier-decay exponents of the Daubechies family, `M - log2(P_M(3/4)) / 2`
/// where `P_M` is the Daubechies half-band polynomial. Index `M - 1`.
const REGULARITY: [f64; MAX_ORDER] = [
    1.0, 1.339036, 1.636040, 1.912537, 2.176608, 2.432246, 2.681743, 2.926549, 3.167644, 3.405724,
];

/// Settings for the numerical evaluation of `|psi_hat|^2` and its weighted integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Integration range is `[0, max_frequency]` before tail extrapolation.
    pub max_frequency: f64,
    /// Mixed absolute/relative tolerance per adaptive panel.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            max_frequency: 4096.0 * std::f64::consts::PI,
            tolerance: 1e-11,
        }
    }
}

/// A Daubechies wavelet with `M` vanishing moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub vanishing_moments: usize,
    pub regularity: f64,
    pub support_length: usize,
    pub cascade_depth: usize,
    pub quadrature: QuadratureConfig,
}

impl WaveletSpec {
    pub fn daubechies(m: usize) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&m) {
            return Err(MwwError::UnsupportedOrder(m));
        }
        Ok(Self {
            vanishing_moments: m,
            regularity: REGULARITY[m - 1],
            support_length: 2 * m - 1,
            cascade_depth: 16,
            quadrature: QuadratureConfig::default(),
        })
    }

    pub fn with_cascade_depth(mut self, depth: usize) -> Self {
        self.cascade_depth = depth;
        self
    }

    /// Number of filter taps, `2M`.
    pub fn filter_len(&self) -> usize {
        2 * self.vanishing_moments
    }

    pub fn filters(&self) -> FilterPair {
        daubechies_filters(self.vanishing_moments).expect("order validated at construction")
    }

    /// Open interval `(-alpha, M)` on which `K` is evaluated.
    pub fn k_domain(&self) -> (f64, f64) {
        (-self.regularity, self.vanishing_moments as f64)
    }

    /// Lower admissible memory exponent `(1 + beta) / 2 - alpha`.
    pub fn memory_lower_bound(&self, beta: f64) -> f64 {
        (1.0 + beta) / 2.0 - self.regularity
    }
}

/// Low-pass/high-pass quadrature-mirror pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

/// Daubechies filters with `m` vanishing moments. The high-pass filter is
/// `g_k = (-1)^k h_{2M-1-k}`.
pub fn daubechies_filters(m: usize) -> Result<FilterPair> {
    let low: Vec<f64> = match m {
        1 => DB1.to_vec(),
        2 => DB2.to_vec(),
        3 => DB3.to_vec(),
        4 => DB4.to_vec(),
        5 => DB5.to_vec(),
        6 => DB6.to_vec(),
        7 => DB7.to_vec(),
        8 => DB8.to_vec(),
        9 => DB9.to_vec(),
        10 => DB10.to_vec(),
        _ => return Err(MwwError::UnsupportedOrder(m)),
    };
    let len = low.len();
    let high = (0..len)
        .map(|k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s * low[len - 1 - k]
        })
        .collect();
    Ok(FilterPair { low, high })
}

// Extremal-phase coefficients from spectral factorization of the
// half-band polynomial, rounded from 60-digit arithmetic.
#[allow(clippy::excessive_precision)]
mod table {
    pub const DB1: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2; 2];
    pub const DB2: [f64; 4] = [
        0.482962913144534143375,
        0.836516303737807905575,
        0.224143868042013381026,
        -0.129409522551260381174,
    ];
    pub const DB3: [f64; 6] = [
        0.332670552950082615999,
        0.806891509311092576494,
        0.459877502118491570095,
        -0.135011020010254588696,
        -0.0854412738820266616928,
        0.0352262918857095366027,
    ];
    pub const DB4: [f64; 8] = [
        0.230377813308896500863,
        0.71484657055291564709,
        0.630880767929858907882,
        -0.0279837694168598542114,
        -0.18703481171909308408,
        0.0308413818355607636272,
        0.0328830116668851997354,
        -0.0105974017850690321049,
    ];
    pub const DB5: [f64; 10] = [
        0.160102397974192914481,
        0.60382926979718967054,
        0.724308528437772927728,
        0.138428145901320731505,
        -0.242294887066382031863,
        -0.0322448695846383746485,
        0.0775714938400457135231,
        -0.00624149021279827427419,
        -0.0125807519990819994685,
        0.003335725285473771278,
    ];
    pub const DB6: [f64; 12] = [
        0.111540743350109463621,
        0.494623890398453085677,
        0.751133908021095350679,
        0.315250351709197629086,
        -0.226264693965439820076,
        -0.129766867567261935562,
        0.0975016055873230491023,
        0.0275228655303057286255,
        -0.0315820393174860295651,
        0.000553842201161496139252,
        0.00477725751094551063964,
        -0.00107730108530847956485,
    ];
    pub const DB7: [f64; 14] = [
        0.07785205408500917902,
        0.396539319481917306539,
        0.729132090846235119917,
        0.469782287405193122472,
        -0.143906003928564975405,
        -0.224036184993874982638,
        0.0713092192668302647509,
        0.0806126091510830719129,
        -0.0380299369350144135796,
        -0.0165745416306668806541,
        0.012550998556099840613,
        0.000429577972921366521132,
        -0.00180164070404749091527,
        0.000353713799974520248446,
    ];
    pub const DB8: [f64; 16] = [
        0.054415842243104009955,
        0.312871590914299970659,
        0.675630736297289806808,
        0.585354683654206712771,
        -0.0158291052563493056674,
        -0.284015542961546926516,
        0.000472484573913282770361,
        0.128747426620478458857,
        -0.0173693010018075461696,
        -0.0440882539307947515068,
        0.0139810279173982816487,
        0.00874609404740577671638,
        -0.00487035299345157431042,
        -0.000391740373376947046298,
        0.00067544940645056936637,
        -0.000117476784124769533731,
    ];
    pub const DB9: [f64; 18] = [
        0.0380779473638783465887,
        0.243834674612590353732,
        0.604823123690111111903,
        0.657288078051300538078,
        0.133197385825007576191,
        -0.293273783279174908806,
        -0.0968407832229764605135,
        0.148540749338106380135,
        0.0307256814793333792123,
        -0.0676328290613299736756,
        0.000250947114831451957587,
        0.0223616621236790972054,
        -0.00472320475775139727793,
        -0.0042815036824634298345,
        0.00184764688305622647662,
        0.000230385763523195967205,
        -0.000251963188942710136975,
        0.0000393473203162715994807,
    ];
    pub const DB10: [f64; 20] = [
        0.0266700579005555535866,
        0.188176800077691489021,
        0.527201188931725586482,
        0.688459039453603565742,
        0.281172343660577460749,
        -0.249846424327315379416,
        -0.195946274377377043504,
        0.127369340335793260083,
        0.0930573646035723511604,
        -0.0713941471663970871453,
        -0.0294575368218758128583,
        0.0332126740593410017398,
        0.00360655356695616965542,
        -0.0107331754833305750443,
        0.00139535174705290116579,
        0.00199240529518505611716,
        -0.000685856694959711626561,
        -0.000116466855129285450951,
        0.0000935886703200695913341,
        -0.0000132642028945212448124,
    ];
}
use table::*;
