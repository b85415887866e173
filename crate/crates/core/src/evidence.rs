//! Four-class information model and competence-gated perception.
//!
//! Media evidence is either pro or con the (false) proposition and either
//! valuable or noisy. An agent always reads the pro/con direction correctly;
//! whether it recognizes an item as valuable or noisy is a Bernoulli draw
//! with success probability equal to its topic competence.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::opinion::{from_evidence, EvidenceCounts, Opinion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvidenceClass {
    /// Pro, valuable.
    PV,
    /// Pro, noisy.
    PN,
    /// Con, valuable.
    CV,
    /// Con, noisy.
    CN,
}

impl EvidenceClass {
    pub const ALL: [EvidenceClass; 4] = [
        EvidenceClass::PV,
        EvidenceClass::PN,
        EvidenceClass::CV,
        EvidenceClass::CN,
    ];

    pub fn token(self) -> &'static str {
        match self {
            EvidenceClass::PV => "PV",
            EvidenceClass::PN => "PN",
            EvidenceClass::CV => "CV",
            EvidenceClass::CN => "CN",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for EvidenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for EvidenceClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "PV" => Ok(EvidenceClass::PV),
            "PN" => Ok(EvidenceClass::PN),
            "CV" => Ok(EvidenceClass::CV),
            "CN" => Ok(EvidenceClass::CN),
            other => Err(format!("unknown evidence token `{other}`")),
        }
    }
}

/// Requested number of items per evidence class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceMix {
    pub n_pv: u64,
    pub n_pn: u64,
    pub n_cv: u64,
    pub n_cn: u64,
}

impl EvidenceMix {
    pub fn new(n_pv: u64, n_pn: u64, n_cv: u64, n_cn: u64) -> Self {
        EvidenceMix {
            n_pv,
            n_pn,
            n_cv,
            n_cn,
        }
    }

    pub fn total(&self) -> u64 {
        self.n_pv + self.n_pn + self.n_cv + self.n_cn
    }

    pub fn count(&self, class: EvidenceClass) -> u64 {
        match class {
            EvidenceClass::PV => self.n_pv,
            EvidenceClass::PN => self.n_pn,
            EvidenceClass::CV => self.n_cv,
            EvidenceClass::CN => self.n_cn,
        }
    }
}

impl Default for EvidenceMix {
    fn default() -> Self {
        EvidenceMix::new(1000, 1000, 1000, 1000)
    }
}

/// An ordered sequence of evidence items with cached per-class counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvidenceMatrix {
    items: Vec<EvidenceClass>,
    counts: [u64; 4],
}

impl EvidenceMatrix {
    pub fn from_items(items: Vec<EvidenceClass>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyEvidence);
        }
        let mut counts = [0u64; 4];
        for item in &items {
            counts[item.index()] += 1;
        }
        Ok(EvidenceMatrix { items, counts })
    }

    pub fn items(&self) -> &[EvidenceClass] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn mix(&self) -> EvidenceMix {
        let [n_pv, n_pn, n_cv, n_cn] = self.counts;
        EvidenceMix::new(n_pv, n_pn, n_cv, n_cn)
    }

    /// Writes the plain-text form: a count header, then one token per line.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let m = self.mix();
        writeln!(
            out,
            "# pv={} pn={} cv={} cn={}",
            m.n_pv, m.n_pn, m.n_cv, m.n_cn
        )?;
        for item in &self.items {
            writeln!(out, "{item}")?;
        }
        Ok(())
    }

    /// Reads the plain-text form and checks the header against a recount.
    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut header: Option<EvidenceMix> = None;
        let mut items = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if header.is_none() && items.is_empty() {
                    header = Some(parse_header(rest, line_no)?);
                }
                continue;
            }
            let class = line
                .parse::<EvidenceClass>()
                .map_err(|e| Error::parse(line_no, e))?;
            items.push(class);
        }
        let header = header.ok_or_else(|| Error::parse(1, "missing `# pv= pn= cv= cn=` header"))?;
        let matrix = EvidenceMatrix::from_items(items)?;
        if matrix.mix() != header {
            return Err(Error::parse(
                1,
                format!("header {header:?} disagrees with item counts {:?}", matrix.mix()),
            ));
        }
        Ok(matrix)
    }
}

fn parse_header(rest: &str, line_no: usize) -> Result<EvidenceMix> {
    let mut fields: [Option<u64>; 4] = [None; 4];
    for kv in rest.split_whitespace() {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("expected key=value, got `{kv}`")))?;
        let slot = match key {
            "pv" => 0,
            "pn" => 1,
            "cv" => 2,
            "cn" => 3,
            _ => return Err(Error::parse(line_no, format!("unknown header key `{key}`"))),
        };
        let n = value
            .parse::<u64>()
            .map_err(|e| Error::parse(line_no, format!("bad count for {key}: {e}")))?;
        fields[slot] = Some(n);
    }
    match fields {
        [Some(pv), Some(pn), Some(cv), Some(cn)] => Ok(EvidenceMix::new(pv, pn, cv, cn)),
        _ => Err(Error::parse(line_no, "header must give pv, pn, cv and cn")),
    }
}

/// Counts of evidence perceived as supporting belief, disbelief, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PerceivedCounts {
    pub belief: u64,
    pub disbelief: u64,
    pub uncertain: u64,
}

impl PerceivedCounts {
    pub fn total(&self) -> u64 {
        self.belief + self.disbelief + self.uncertain
    }
}

/// Builds a matrix holding exactly the requested counts, uniformly shuffled.
pub fn build_matrix<R: Rng + ?Sized>(mix: EvidenceMix, rng: &mut R) -> Result<EvidenceMatrix> {
    if mix.total() == 0 {
        return Err(Error::EmptyEvidence);
    }
    let mut items = Vec::with_capacity(mix.total() as usize);
    for class in EvidenceClass::ALL {
        items.extend(std::iter::repeat_n(class, mix.count(class) as usize));
    }
    items.shuffle(rng);
    EvidenceMatrix::from_items(items)
}

/// Competence-filtered reading of an evidence matrix.
///
/// One uniform draw `r ∈ [0, 1)` per item; the item's value (valuable vs.
/// noisy) is recognized iff `r < tc`. Recognized valuable items and
/// misread noisy items count toward their pro/con side; the rest count as
/// uncertain. With this convention `tc = 0` and `tc = 1` are fully
/// deterministic.
pub fn map_evidence<R: Rng + ?Sized>(
    tc: f64,
    ev: &EvidenceMatrix,
    rng: &mut R,
) -> Result<PerceivedCounts> {
    check_range("topic competence", tc, 0.0, 1.0)?;
    let mut pc = PerceivedCounts::default();
    for item in ev.items() {
        let recognized = rng.random::<f64>() < tc;
        match (item, recognized) {
            (EvidenceClass::PV, true) | (EvidenceClass::PN, false) => pc.belief += 1,
            (EvidenceClass::CV, true) | (EvidenceClass::CN, false) => pc.disbelief += 1,
            _ => pc.uncertain += 1,
        }
    }
    Ok(pc)
}

/// Opinion formed from perceived counts: each count over their sum.
pub fn perceived_opinion(pc: PerceivedCounts, a: f64) -> Result<Opinion> {
    from_evidence(
        EvidenceCounts::new(pc.belief, pc.disbelief, pc.uncertain as f64),
        a,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;

    fn uniform(class: EvidenceClass, n: usize) -> EvidenceMatrix {
        EvidenceMatrix::from_items(vec![class; n]).unwrap()
    }

    #[test]
    fn build_matrix_examples() {
        let mut r = rng::stream(1, 0);
        let m = build_matrix(EvidenceMix::new(2, 0, 0, 0), &mut r).unwrap();
        assert_eq!(m.items(), &[EvidenceClass::PV, EvidenceClass::PV]);

        let mix = EvidenceMix::new(1, 1, 1, 1);
        let a = build_matrix(mix, &mut rng::stream(42, 0)).unwrap();
        let b = build_matrix(mix, &mut rng::stream(42, 0)).unwrap();
        assert_eq!(a, b);

        let mix = EvidenceMix::new(1000, 1000, 1000, 1000);
        let m = build_matrix(mix, &mut rng::stream(3, 0)).unwrap();
        assert_eq!(m.len(), 4000);
        let recount = EvidenceMatrix::from_items(m.items().to_vec()).unwrap();
        assert_eq!(recount.mix(), mix);

        assert!(matches!(
            build_matrix(EvidenceMix::new(0, 0, 0, 0), &mut r),
            Err(Error::EmptyEvidence)
        ));
    }

    #[test]
    fn map_evidence_boundaries() {
        let mut r = rng::stream(9, 0);
        let pc = map_evidence(1.0, &uniform(EvidenceClass::PV, 10), &mut r).unwrap();
        assert_eq!(pc, PerceivedCounts { belief: 10, disbelief: 0, uncertain: 0 });
        let pc = map_evidence(0.0, &uniform(EvidenceClass::PN, 10), &mut r).unwrap();
        assert_eq!(pc, PerceivedCounts { belief: 10, disbelief: 0, uncertain: 0 });

        let m = build_matrix(EvidenceMix::new(7, 3, 5, 11), &mut r).unwrap();
        let full = map_evidence(1.0, &m, &mut r).unwrap();
        assert_eq!((full.belief, full.disbelief, full.uncertain), (7, 5, 14));
        let none = map_evidence(0.0, &m, &mut r).unwrap();
        assert_eq!((none.belief, none.disbelief, none.uncertain), (3, 11, 12));

        assert!(map_evidence(1.5, &m, &mut r).is_err());
    }

    #[test]
    fn perceived_opinion_examples() {
        let o = perceived_opinion(PerceivedCounts { belief: 2, disbelief: 1, uncertain: 1 }, 0.5)
            .unwrap();
        assert_eq!((o.belief(), o.disbelief(), o.uncertainty()), (0.5, 0.25, 0.25));
        let o = perceived_opinion(PerceivedCounts { belief: 0, disbelief: 0, uncertain: 5 }, 0.5)
            .unwrap();
        assert_eq!((o.belief(), o.disbelief(), o.uncertainty()), (0.0, 0.0, 1.0));
        assert!(perceived_opinion(PerceivedCounts::default(), 0.5).is_err());
    }

    #[test]
    fn perceived_opinion_agrees_with_from_evidence() {
        use rand::Rng;
        let mut r = rng::stream(100, 0);
        for _ in 0..100 {
            let pc = PerceivedCounts {
                belief: r.random_range(0..500),
                disbelief: r.random_range(0..500),
                uncertain: r.random_range(1..500),
            };
            let a = r.random::<f64>();
            let direct = from_evidence(
                EvidenceCounts::new(pc.belief, pc.disbelief, pc.uncertain as f64),
                a,
            )
            .unwrap();
            // Independent arithmetic on the raw counts.
            let n = pc.total() as f64;
            let o = perceived_opinion(pc, a).unwrap();
            assert_eq!(o, direct);
            assert!((o.belief() - pc.belief as f64 / n).abs() < 1e-12);
            assert!((o.disbelief() - pc.disbelief as f64 / n).abs() < 1e-12);
            assert!((o.uncertainty() - pc.uncertain as f64 / n).abs() < 1e-12);
        }
    }

    #[test]
    fn text_format_round_trips_and_validates() {
        let m = build_matrix(EvidenceMix::new(3, 2, 1, 4), &mut rng::stream(5, 0)).unwrap();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# pv=3 pn=2 cv=1 cn=4\n"));
        assert_eq!(EvidenceMatrix::read_from(&buf[..]).unwrap(), m);

        let bad = "# pv=1 pn=0 cv=0 cn=0\nPV\nCN\n";
        assert!(EvidenceMatrix::read_from(bad.as_bytes()).is_err());
        let bad = "# pv=1 pn=0 cv=0 cn=0\nXX\n";
        assert!(matches!(
            EvidenceMatrix::read_from(bad.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(EvidenceMatrix::read_from("PV\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn perception_conserves_items(
            pv in 0u64..50, pn in 0u64..50, cv in 0u64..50, cn in 1u64..50,
            tc in 0.0..=1.0f64, seed in any::<u64>(),
        ) {
            let mut r = rng::stream(seed, 0);
            let m = build_matrix(EvidenceMix::new(pv, pn, cv, cn), &mut r).unwrap();
            let pc = map_evidence(tc, &m, &mut r).unwrap();
            prop_assert_eq!(pc.total(), m.len() as u64);
            // Pro items never become disbelief and con items never become belief.
            prop_assert!(pc.belief <= pv + pn);
            prop_assert!(pc.disbelief <= cv + cn);
            let o = perceived_opinion(pc, 0.5).unwrap();
            prop_assert!((o.belief() + o.disbelief() + o.uncertainty() - 1.0).abs() < 1e-12);
        }
    }
}
