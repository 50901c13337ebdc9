use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::IsingModel;
use crate::statevector::Bitstring;
use crate::{Error, Result};

/// Boolean route-by-flight matrix: `rows[i][f]` is true when flight `f` is
/// part of route `i`. A selection `x` has `x_i` equal to bit `i` of a
/// [`Bitstring`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCoverInstance {
    num_routes: usize,
    num_flights: usize,
    rows: Vec<Vec<bool>>,
}

impl ExactCoverInstance {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let num_routes = rows.len();
        if num_routes == 0 {
            return Err(Error::invalid("instance needs at least one route"));
        }
        let num_flights = rows[0].len();
        if num_flights == 0 {
            return Err(Error::invalid("instance needs at least one flight"));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != num_flights) {
            return Err(Error::invalid(format!(
                "route {i} has {} flights, expected {num_flights}",
                rows[i].len()
            )));
        }
        if let Some(f) = (0..num_flights).find(|&f| rows.iter().all(|r| !r[f])) {
            return Err(Error::invalid(format!("flight {f} is not covered by any route")));
        }
        Ok(Self {
            num_routes,
            num_flights,
            rows,
        })
    }

    /// Builds an instance from 0/1 entries.
    pub fn from_matrix(rows: &[&[u8]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| v != 0).collect())
                .collect(),
        )
    }

    pub fn num_routes(&self) -> usize {
        self.num_routes
    }

    pub fn num_flights(&self) -> usize {
        self.num_flights
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// `C(x) = sum_f (sum_i A_if x_i - 1)^2`.
    pub fn cost(&self, x: &Bitstring) -> Result<u64> {
        x.expect_len(self.num_routes)?;
        Ok(self.cost_index(x.index()))
    }

    pub(crate) fn cost_index(&self, q: usize) -> u64 {
        (0..self.num_flights)
            .map(|f| {
                let covered = self
                    .rows
                    .iter()
                    .enumerate()
                    .filter(|(i, r)| r[f] && (q >> i) & 1 == 1)
                    .count() as i64;
                ((covered - 1) * (covered - 1)) as u64
            })
            .sum()
    }

    /// Ising form of the cover cost under `x_i = (1 - s_i) / 2`.
    ///
    /// Writing `a_f` for the number of routes containing flight `f`, each
    /// flight contributes `(a_f/2 - 1 - sum_i A_if s_i / 2)^2`, which expands to
    /// `h_i = sum_f A_if (1 - a_f/2)`, `J_ij = sum_f A_if A_jf / 2` and
    /// `offset = sum_f ((a_f/2 - 1)^2 + a_f/4)`.
    pub fn to_ising(&self) -> IsingModel {
        let n = self.num_routes;
        let mut h = vec![0.0; n];
        let mut couplings = Vec::new();
        let mut offset = 0.0;
        for f in 0..self.num_flights {
            let members: Vec<usize> = (0..n).filter(|&i| self.rows[i][f]).collect();
            let a = members.len() as f64;
            let r = a / 2.0 - 1.0;
            offset += r * r + a / 4.0;
            for (k, &i) in members.iter().enumerate() {
                h[i] -= r;
                for &j in &members[k + 1..] {
                    couplings.push(((i, j), 0.5));
                }
            }
        }
        IsingModel::new(h, couplings, offset).expect("indices come from the instance")
    }
}

/// A generated instance together with the cover it was built around.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedCover {
    pub instance: ExactCoverInstance,
    pub planted: Bitstring,
}

/// Seeded generator for exact cover instances with at least one exact cover.
///
/// The flights are first partitioned among `planted_routes` routes (the
/// planted solution). The remaining routes are random distractors of similar
/// size, and the final route order is shuffled.
#[derive(Clone, Debug)]
pub struct CoverGenerator {
    pub num_routes: usize,
    pub num_flights: usize,
    pub planted_routes: Option<usize>,
}

impl CoverGenerator {
    pub fn new(num_routes: usize, num_flights: usize) -> Self {
        Self {
            num_routes,
            num_flights,
            planted_routes: None,
        }
    }

    fn planted_count(&self) -> usize {
        self.planted_routes
            .unwrap_or_else(|| (self.num_routes / 3).clamp(1, self.num_flights.max(1)))
    }

    pub fn generate(&self, seed: u64) -> Result<PlantedCover> {
        let (n, f) = (self.num_routes, self.num_flights);
        if n == 0 || f == 0 {
            return Err(Error::invalid("need at least one route and one flight"));
        }
        let k = self.planted_count();
        if k == 0 || k > n || k > f {
            return Err(Error::invalid(format!(
                "cannot plant {k} routes with {n} routes and {f} flights"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // every planted route gets one flight, the rest are spread at random
        let mut flights: Vec<usize> = (0..f).collect();
        flights.shuffle(&mut rng);
        let mut rows = vec![vec![false; f]; n];
        for (pos, &fl) in flights.iter().enumerate() {
            let route = if pos < k { pos } else { rng.random_range(0..k) };
            rows[route][fl] = true;
        }

        let mean_size = (f as f64 / k as f64).round().max(1.0) as usize;
        for i in k..n {
            for _attempt in 0..16 {
                let size = rng.random_range(1..=(mean_size + 1).min(f));
                let mut pick: Vec<usize> = (0..f).collect();
                pick.shuffle(&mut rng);
                let mut row = vec![false; f];
                for &fl in &pick[..size] {
                    row[fl] = true;
                }
                let duplicate = rows[..i].contains(&row);
                rows[i] = row;
                if !duplicate {
                    break;
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let shuffled: Vec<Vec<bool>> = order.iter().map(|&i| rows[i].clone()).collect();
        let planted_bits: Vec<bool> = order.iter().map(|&i| i < k).collect();

        Ok(PlantedCover {
            instance: ExactCoverInstance::new(shuffled)?,
            planted: Bitstring::from_bits(&planted_bits)?,
        })
    }
}

/// Seeded instance with `num_routes` routes and `num_flights` flights that has
/// at least one exact cover.
pub fn random_cover_instance(
    num_routes: usize,
    num_flights: usize,
    seed: u64,
) -> Result<ExactCoverInstance> {
    Ok(CoverGenerator::new(num_routes, num_flights)
        .generate(seed)?
        .instance)
}
