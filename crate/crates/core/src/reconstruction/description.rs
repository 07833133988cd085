//! Compressed descriptions of a mapper table, relative to a coder.
//!
//! Both shapes keep an explicit remainder table (`rest`) and omit some
//! entries. Seed-driven descriptions list `c` images whose seeds the
//! recovery rediscovers by replaying the coder. Deletion-driven descriptions
//! drop `d` whole entries and keep a short advice triple per dropped seed:
//! the witness message, the accepted-candidate rank of the true image, and
//! the index of the membership query that touches it.

use crate::gf2::BitVector;

use super::ReconError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgeableAdvice {
    /// Witness message for the dropped seed.
    pub x: BitVector,
    /// 1-based rank of the true image among accepted candidates.
    pub a: u64,
    /// 1-based index of the first distinct membership query equal to the
    /// true image, in the witness run.
    pub b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DescriptionBody {
    /// Images to rediscover, strictly ascending.
    Invertible { t_images: Vec<BitVector> },
    /// Dropped seeds with advice, strictly ascending by seed.
    Forgeable { entries: Vec<(BitVector, ForgeableAdvice)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Description {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub body: DescriptionBody,
    /// Explicit part of the table, strictly ascending by seed.
    pub rest: Vec<(BitVector, BitVector)>,
}

impl Description {
    pub fn verdict_name(&self) -> &'static str {
        match self.body {
            DescriptionBody::Invertible { .. } => "invertible",
            DescriptionBody::Forgeable { .. } => "forgeable",
        }
    }

    /// Number of omitted table entries (`c` or `d`).
    pub fn omitted(&self) -> usize {
        match &self.body {
            DescriptionBody::Invertible { t_images } => t_images.len(),
            DescriptionBody::Forgeable { entries } => entries.len(),
        }
    }

    /// Text form, `fdesc <verdict> <m> <n> <k> <q>` followed by the body
    /// block (`t` or `adv`) and the `rest` block.
    pub fn to_text(&self) -> String {
        let mut out =
            format!("fdesc {} {} {} {} {}\n", self.verdict_name(), self.m, self.n, self.k, self.q);
        match &self.body {
            DescriptionBody::Invertible { t_images } => {
                out.push_str(&format!("t {}\n", t_images.len()));
                for z in t_images {
                    out.push_str(&z.to_hex());
                    out.push('\n');
                }
            }
            DescriptionBody::Forgeable { entries } => {
                out.push_str(&format!("adv {}\n", entries.len()));
                for (y, adv) in entries {
                    out.push_str(&format!(
                        "{} {} {} {}\n",
                        y.to_hex(),
                        adv.x.to_hex(),
                        adv.a,
                        adv.b
                    ));
                }
            }
        }
        out.push_str(&format!("rest {}\n", self.rest.len()));
        for (y, z) in &self.rest {
            out.push_str(&format!("{} {}\n", y.to_hex(), z.to_hex()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ReconError> {
        fn parse(msg: String) -> ReconError {
            ReconError::Parse(msg)
        }
        fn expect_block(lines: &mut std::str::Lines<'_>, tag: &str) -> Result<usize, ReconError> {
            let line = lines.next().ok_or_else(|| parse(format!("missing `{tag}` block")))?;
            let ps: Vec<&str> = line.split_whitespace().collect();
            if ps.len() != 2 || ps[0] != tag {
                return Err(parse(format!("bad block header {line:?}, want `{tag} <count>`")));
            }
            ps[1].parse().map_err(|_| parse(format!("bad count {:?}", ps[1])))
        }
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| parse("empty input".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 6 || parts[0] != "fdesc" {
            return Err(parse(format!("bad header {header:?}")));
        }
        let verdict = parts[1];
        let nums: Vec<usize> = parts[2..]
            .iter()
            .map(|s| s.parse().map_err(|_| parse(format!("bad dimension {s:?}"))))
            .collect::<Result<_, _>>()?;
        let (m, n, k, q) = (nums[0], nums[1], nums[2], nums[3]);
        let body = match verdict {
            "invertible" => {
                let c = expect_block(&mut lines, "t")?;
                let mut t_images = Vec::with_capacity(c);
                for _ in 0..c {
                    let line = lines.next().ok_or_else(|| parse(format!("expected {c} images")))?;
                    t_images.push(BitVector::from_hex(n, line.trim())?);
                }
                DescriptionBody::Invertible { t_images }
            }
            "forgeable" => {
                let d = expect_block(&mut lines, "adv")?;
                let mut entries = Vec::with_capacity(d);
                for _ in 0..d {
                    let line =
                        lines.next().ok_or_else(|| parse(format!("expected {d} advice rows")))?;
                    let ps: Vec<&str> = line.split_whitespace().collect();
                    if ps.len() != 4 {
                        return Err(parse(format!("bad advice row {line:?}")));
                    }
                    let y = BitVector::from_hex(m, ps[0])?;
                    let x = BitVector::from_hex(k, ps[1])?;
                    let a: u64 =
                        ps[2].parse().map_err(|_| parse(format!("bad rank {:?}", ps[2])))?;
                    let b: usize =
                        ps[3].parse().map_err(|_| parse(format!("bad index {:?}", ps[3])))?;
                    entries.push((y, ForgeableAdvice { x, a, b }));
                }
                DescriptionBody::Forgeable { entries }
            }
            other => return Err(parse(format!("unknown verdict {other:?}"))),
        };
        let r = expect_block(&mut lines, "rest")?;
        let mut rest = Vec::with_capacity(r);
        for _ in 0..r {
            let line = lines.next().ok_or_else(|| parse(format!("expected {r} rest rows")))?;
            let ps: Vec<&str> = line.split_whitespace().collect();
            if ps.len() != 2 {
                return Err(parse(format!("bad rest row {line:?}")));
            }
            rest.push((BitVector::from_hex(m, ps[0])?, BitVector::from_hex(n, ps[1])?));
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(parse("trailing content".into()));
        }
        Ok(Description { m, n, k, q, body, rest })
    }
}
