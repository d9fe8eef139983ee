//! Prime generation and caching, high-precision prime logarithms, and the
//! smooth-number membership character behind the finite-Euler-product
//! subseries.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::hpnum::{digits_to_bits, HReal};

/// Hard cap on prime counts; far above it the sieve stops being desk-scale.
pub const MAX_PRIME_COUNT: usize = 100_000_000;

const SEGMENT: usize = 1 << 20;

/// First `count` primes by a segmented sieve with 2^20-entry segments.
pub fn first_n_primes(count: usize) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(Error::domain("first_n_primes", "count must be at least 1"));
    }
    if count > MAX_PRIME_COUNT {
        return Err(Error::ResourceLimit(format!(
            "requested {count} primes, cap is {MAX_PRIME_COUNT}"
        )));
    }
    let bound = prime_upper_bound(count);
    let sqrt_bound = (bound as f64).sqrt() as u64 + 2;

    // base primes by a plain sieve
    let mut base_sieve = vec![true; sqrt_bound as usize + 1];
    base_sieve[0] = false;
    if sqrt_bound >= 1 {
        base_sieve[1] = false;
    }
    let mut i = 2usize;
    while i * i <= sqrt_bound as usize {
        if base_sieve[i] {
            let mut j = i * i;
            while j <= sqrt_bound as usize {
                base_sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    let base: Vec<u64> = (2..=sqrt_bound)
        .filter(|&k| base_sieve[k as usize])
        .collect();

    let mut primes = Vec::with_capacity(count);
    let mut seg = vec![true; SEGMENT];
    let mut lo = 2u64;
    while primes.len() < count && lo <= bound {
        let hi = (lo + SEGMENT as u64).min(bound + 1);
        let len = (hi - lo) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p >= hi {
                break;
            }
            let mut start = p * p;
            if start < lo {
                start = lo.div_ceil(p) * p;
            }
            let mut j = (start - lo) as usize;
            while j < len {
                seg[j] = false;
                j += p as usize;
            }
        }
        for (j, &is_prime) in seg[..len].iter().enumerate() {
            if is_prime {
                primes.push(lo + j as u64);
                if primes.len() == count {
                    break;
                }
            }
        }
        lo = hi;
    }
    debug_assert_eq!(primes.len(), count);
    Ok(primes)
}

fn prime_upper_bound(count: usize) -> u64 {
    if count < 6 {
        return 13;
    }
    let n = count as f64;
    (n * (n.ln() + n.ln().ln())) as u64 + 16
}

/// The first N primes together with their logarithms at a stated precision.
///
/// Immutable after construction; prime sums across the table are safe to
/// share between threads.
pub struct PrimeTable {
    primes: Vec<u64>,
    logs: Vec<Float>,
    log_digits: u32,
}

impl PrimeTable {
    /// Sieves the first `count` primes and computes log p at `log_digits`
    /// decimal digits.
    pub fn generate(count: usize, log_digits: u32) -> Result<Self> {
        let primes = first_n_primes(count)?;
        let logs = compute_logs(&primes, log_digits);
        Ok(PrimeTable { primes, logs, log_digits })
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }

    /// i is zero-based; `prime(0) == 2`.
    pub fn prime(&self, i: usize) -> u64 {
        self.primes[i]
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn last_prime(&self) -> u64 {
        *self.primes.last().expect("table is never empty")
    }

    pub fn log_digits(&self) -> u32 {
        self.log_digits
    }

    pub fn log(&self, i: usize) -> HReal {
        HReal::from_float(self.logs[i].clone(), self.log_digits)
    }

    pub(crate) fn log_float(&self, i: usize) -> &Float {
        &self.logs[i]
    }

    pub fn cache_file_name(count: usize) -> String {
        format!("primes_{count}.bin")
    }

    /// Writes `primes_<count>.bin`: a `ZPRIMES v1 <count>` header line then
    /// raw little-endian 64-bit integers. Logs are not stored; they are
    /// recomputed on load at whatever precision the run needs.
    pub fn store_cache(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(Self::cache_file_name(self.count()));
        let display = path.display().to_string();
        let file = File::create(&path).map_err(|e| Error::io(&display, e))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "ZPRIMES v1 {}", self.count()).map_err(|e| Error::io(&display, e))?;
        for &p in &self.primes {
            w.write_all(&p.to_le_bytes()).map_err(|e| Error::io(&display, e))?;
        }
        w.flush().map_err(|e| Error::io(&display, e))?;
        Ok(path)
    }

    /// Loads a cache file and recomputes logs at `log_digits`.
    pub fn load_cache(path: &Path, log_digits: u32) -> Result<Self> {
        let display = path.display().to_string();
        let file = File::open(path).map_err(|e| Error::io(&display, e))?;
        let mut r = BufReader::new(file);
        let mut header = Vec::new();
        let mut byte = [0u8; 1];
        loop {
            r.read_exact(&mut byte).map_err(|e| Error::io(&display, e))?;
            if byte[0] == b'\n' {
                break;
            }
            header.push(byte[0]);
            if header.len() > 64 {
                return Err(Error::CacheFormat {
                    path: display,
                    detail: "header line too long".into(),
                });
            }
        }
        let header = String::from_utf8(header).map_err(|_| Error::CacheFormat {
            path: display.clone(),
            detail: "header is not UTF-8".into(),
        })?;
        let mut parts = header.split_whitespace();
        let (magic, version, count) = (parts.next(), parts.next(), parts.next());
        if magic != Some("ZPRIMES") {
            return Err(Error::CacheFormat {
                path: display,
                detail: format!("bad magic {magic:?}"),
            });
        }
        if version != Some("v1") {
            return Err(Error::CacheFormat {
                path: display,
                detail: format!("unsupported format version {version:?}"),
            });
        }
        let count: usize = count
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| Error::CacheFormat {
                path: display.clone(),
                detail: "missing or invalid count".into(),
            })?;
        if count == 0 || count > MAX_PRIME_COUNT {
            return Err(Error::CacheFormat {
                path: display,
                detail: format!("count {count} out of range"),
            });
        }
        let mut buf = vec![0u8; count * 8];
        r.read_exact(&mut buf).map_err(|e| Error::io(&display, e))?;
        let primes: Vec<u64> = buf
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if primes.first() != Some(&2) || !primes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::CacheFormat {
                path: display,
                detail: "prime list is not a strictly increasing sequence starting at 2".into(),
            });
        }
        let logs = compute_logs(&primes, log_digits);
        Ok(PrimeTable { primes, logs, log_digits })
    }

    /// Loads `primes_<count>.bin` from `dir` when present, otherwise sieves
    /// (and stores the cache when a directory is given).
    pub fn load_or_generate(dir: Option<&Path>, count: usize, log_digits: u32) -> Result<Self> {
        if let Some(dir) = dir {
            let path = dir.join(Self::cache_file_name(count));
            if path.is_file() {
                return Self::load_cache(&path, log_digits);
            }
            let table = Self::generate(count, log_digits)?;
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::io(dir.display().to_string(), e))?;
            table.store_cache(dir)?;
            return Ok(table);
        }
        Self::generate(count, log_digits)
    }
}

fn compute_logs(primes: &[u64], log_digits: u32) -> Vec<Float> {
    let bits = digits_to_bits(log_digits);
    primes
        .par_iter()
        .map(|&p| Float::with_val(bits, p).ln())
        .collect()
}

/// Integers whose prime factors all lie among the first `generator_count`
/// primes, listed ascending up to a limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothSet {
    pub generator_count: usize,
    pub members: Vec<u64>,
}

/// True iff n factors entirely over the first `generator_count` primes.
/// n = 1 is smooth for every generator count (empty product).
pub fn smooth_membership(n: u64, generator_count: usize) -> bool {
    assert!(n >= 1, "smooth_membership requires n >= 1");
    if n == 1 {
        return true;
    }
    if generator_count == 0 {
        return false;
    }
    let gens = first_n_primes(generator_count).expect("generator count within cap");
    let mut rest = n;
    for &p in &gens {
        while rest % p == 0 {
            rest /= p;
        }
        if rest == 1 {
            return true;
        }
    }
    rest == 1
}

/// All members of the smooth set up to `limit`, ascending. 1 is always a member.
pub fn enumerate_smooth(generator_count: usize, limit: u64) -> SmoothSet {
    assert!(limit >= 1, "enumerate_smooth requires limit >= 1");
    let gens = if generator_count == 0 {
        Vec::new()
    } else {
        first_n_primes(generator_count).expect("generator count within cap")
    };
    let mut members = vec![1u64];
    let mut frontier = vec![1u64];
    for &p in &gens {
        let mut next = Vec::new();
        for &m in &frontier {
            let mut v = m;
            loop {
                match v.checked_mul(p) {
                    Some(w) if w <= limit => {
                        members.push(w);
                        next.push(w);
                        v = w;
                    }
                    _ => break,
                }
            }
        }
        frontier.extend(next);
    }
    members.sort_unstable();
    members.dedup();
    SmoothSet { generator_count, members }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain Eratosthenes oracle, independent of the segmented code path.
    fn basic_sieve_first(count: usize) -> Vec<u64> {
        let bound = prime_upper_bound(count) as usize;
        let mut s = vec![true; bound + 1];
        s[0] = false;
        s[1] = false;
        for i in 2..=bound {
            if s[i] {
                let mut j = i * i;
                while j <= bound {
                    s[j] = false;
                    j += i;
                }
            }
        }
        (2..=bound).filter(|&k| s[k]).map(|k| k as u64).take(count).collect()
    }

    #[test]
    fn small_primes() {
        assert_eq!(first_n_primes(5).unwrap(), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn hundred_thousandth_prime_vs_independent_sieve() {
        let ours = first_n_primes(100_000).unwrap();
        let oracle = basic_sieve_first(100_000);
        assert_eq!(ours.len(), 100_000);
        assert_eq!(ours, oracle);
        assert_eq!(*ours.last().unwrap(), 1_299_709);
    }

    #[test]
    fn five_million_primes_last_value() {
        let p = first_n_primes(5_000_000).unwrap();
        assert_eq!(p.len(), 5_000_000);
        assert_eq!(*p.last().unwrap(), 86_028_121);
    }

    #[test]
    fn pnt_sanity() {
        for count in [1_000usize, 10_000, 100_000, 5_000_000] {
            let p = first_n_primes(count).unwrap();
            let n = count as f64;
            let ratio = *p.last().unwrap() as f64 / (n * n.ln());
            assert!((0.8..=1.2).contains(&ratio), "N={count}: ratio={ratio}");
        }
    }

    #[test]
    fn count_limits() {
        assert!(matches!(first_n_primes(0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(
            first_n_primes(MAX_PRIME_COUNT + 1),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn logs_match_independent_recomputation() {
        let table = PrimeTable::generate(1000, 40).unwrap();
        for i in [0usize, 1, 10, 500, 999] {
            let expect = HReal::from_u64(table.prime(i), 60).ln();
            let got = table.log(i);
            assert!((&got - &expect).abs().to_f64() < 1e-38);
        }
    }

    #[test]
    fn cache_roundtrip_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let table = PrimeTable::generate(10_000, 32).unwrap();
        let path = table.store_cache(dir.path()).unwrap();
        assert_eq!(
            path.file_name().unwrap().to_str().unwrap(),
            "primes_10000.bin"
        );
        let loaded = PrimeTable::load_cache(&path, 32).unwrap();
        assert_eq!(table.primes, loaded.primes);
        for i in [0usize, 511, 9999] {
            assert_eq!(table.logs[i], loaded.logs[i]);
        }
    }

    #[test]
    fn cache_rejects_corrupt_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("primes_10.bin");
        std::fs::write(&path, b"ZPRIMES v9 10\n0123456789").unwrap();
        assert!(matches!(
            PrimeTable::load_cache(&path, 30),
            Err(Error::CacheFormat { .. })
        ));
        std::fs::write(&path, b"NOTPRIMES v1 10\n").unwrap();
        assert!(matches!(
            PrimeTable::load_cache(&path, 30),
            Err(Error::CacheFormat { .. })
        ));
    }

    #[test]
    fn smooth_examples() {
        assert!(smooth_membership(12, 2));
        assert!(!smooth_membership(5, 2));
        assert!(smooth_membership(1, 0));
        assert!(!smooth_membership(2, 0));

        assert_eq!(
            enumerate_smooth(2, 12).members,
            vec![1, 2, 3, 4, 6, 8, 9, 12]
        );
        assert_eq!(enumerate_smooth(1, 16).members, vec![1, 2, 4, 8, 16]);
        assert_eq!(
            enumerate_smooth(3, 10).members,
            vec![1, 2, 3, 4, 5, 6, 8, 9, 10]
        );
    }

    #[test]
    fn enumerate_matches_membership_bruteforce() {
        let set = enumerate_smooth(3, 500);
        let brute: Vec<u64> = (1..=500).filter(|&n| smooth_membership(n, 3)).collect();
        assert_eq!(set.members, brute);
    }

    proptest! {
        #[test]
        fn multiplicativity(n in 1u64..=1000, m in 1u64..=1000, k in 0usize..5) {
            let lhs = smooth_membership(n * m, k);
            let rhs = smooth_membership(n, k) && smooth_membership(m, k);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
