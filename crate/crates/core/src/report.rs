//! JSON shapes shared by the command-line tool and report files.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::decomposition::PrimeDecomposition;
use crate::error::{Error, Result};
use crate::ideal::{Ideal, Monomial};
use crate::poly::{MonomialOrder, Poly};
use crate::sv_rank::{Provenance, RadicalCertificate, SvPartition};
use crate::RationalCertificate;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub n: usize,
    pub generators: Vec<Monomial>,
}

impl From<&Ideal> for IdealJson {
    fn from(i: &Ideal) -> Self {
        IdealJson { n: i.n(), generators: i.gens().to_vec() }
    }
}

impl IdealJson {
    pub fn to_ideal(&self) -> Result<Ideal> {
        Ideal::new(self.n, self.generators.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub target_ideal: IdealJson,
    /// Empty for certificates that are not layered partitions (products).
    pub layers: Vec<Vec<Monomial>>,
    pub sums: Vec<String>,
    pub verified_sv: bool,
    pub oracle_checked: bool,
}

impl CertificateJson {
    pub fn from_partition(p: &SvPartition, sums: &RationalCertificate, verified_sv: bool) -> Self {
        CertificateJson {
            target_ideal: p.ideal().into(),
            layers: p.layers().to_vec(),
            sums: sums.polys.iter().map(|q| q.to_string()).collect(),
            verified_sv,
            oracle_checked: false,
        }
    }

    pub fn from_certificate(cert: &RationalCertificate) -> Self {
        CertificateJson {
            target_ideal: (&cert.target).into(),
            layers: Vec::new(),
            sums: cert.polys.iter().map(|q| q.to_string()).collect(),
            verified_sv: false,
            oracle_checked: false,
        }
    }

    pub fn partition(&self) -> Result<Option<SvPartition>> {
        if self.layers.is_empty() {
            return Ok(None);
        }
        Ok(Some(SvPartition::new(self.target_ideal.to_ideal()?, self.layers.clone())))
    }

    pub fn certificate(&self) -> Result<RationalCertificate> {
        let target = self.target_ideal.to_ideal()?;
        let polys = self
            .sums
            .iter()
            .map(|s| Poly::<BigRational>::parse(s, target.n(), MonomialOrder::DegRevLex))
            .collect::<Result<Vec<_>>>()?;
        let provenance = if self.layers.is_empty() { Provenance::Manual } else { Provenance::SvPartition };
        Ok(RadicalCertificate { polys, target, provenance })
    }

    /// The sums must be exactly the layer sums when layers are given.
    pub fn check_sums_match_layers(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Ok(());
        }
        let n = self.target_ideal.n;
        if self.layers.len() != self.sums.len() {
            return Err(Error::MalformedCertificate(format!(
                "{} layers but {} sums",
                self.layers.len(),
                self.sums.len()
            )));
        }
        for (k, (layer, sum)) in self.layers.iter().zip(&self.sums).enumerate() {
            let expected = Poly::<BigRational>::sum_of(layer, n, MonomialOrder::DegRevLex);
            let given = Poly::<BigRational>::parse(sum, n, MonomialOrder::DegRevLex)?;
            if expected != given {
                return Err(Error::MalformedCertificate(format!("sum {k} is not the sum of layer {k}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionJson {
    /// Each prime as its sorted variable indices.
    pub primes: Vec<Vec<usize>>,
    pub height: usize,
    pub unmixed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<Vec<usize>>,
}

impl DecompositionJson {
    pub fn new(dec: &PrimeDecomposition, signature: Option<Vec<usize>>) -> Self {
        DecompositionJson {
            primes: dec.primes.iter().map(|p| p.vars().collect()).collect(),
            height: dec.height,
            unmixed: dec.unmixed,
            signature,
        }
    }
}
