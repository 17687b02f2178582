//! Finitely presented base groups and homomorphisms into `Z^n`.
//!
//! A homomorphism into an abelian group factors through the abelianization,
//! so words only ever matter through their exponent-sum vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exactmat::{IntMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("cannot parse presentation: {0}")]
    Parse(String),
    #[error("surface genus must be at least 2, got {0}")]
    GenusTooSmall(u32),
    #[error("homomorphism matrix has {got} columns, presentation has {expected} generators")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("assignment does not respect relator {index}: its image is ({image})")]
    NotAHomomorphism { index: usize, image: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// One letter of a word: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn inv(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word { letters: self.letters.iter().chain(&other.letters).copied().collect() }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { generator: l.generator, inverse: !l.inverse })
                .collect(),
        }
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: usize, b: usize) -> Word {
        Word::new(vec![Letter::gen(a), Letter::gen(b), Letter::inv(a), Letter::inv(b)])
    }

    /// Parses whitespace-separated tokens `name` or `name^e` against `names`.
    /// A power `e` expands to `|e|` letters.
    pub fn parse(text: &str, names: &[String]) -> Result<Word, GroupError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| GroupError::Parse(format!("bad exponent in `{tok}`")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let generator = names
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))?;
            let letter = Letter { generator, inverse: exp < 0 };
            letters.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
        }
        Ok(Word { letters })
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = self.names.get(l.generator).map(String::as_str).unwrap_or("?");
            if l.inverse {
                write!(f, "{name}^-1")?;
            } else {
                f.write_str(name)?;
            }
        }
        Ok(())
    }
}

/// What a presentation is known to present. Only used for reporting and for
/// deciding which invariants can be claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Surface { genus: u32 },
    Torus { rank: u32 },
    /// The Paoluzzi-Zimmermann group `G_{3,1}`.
    PaoluzziZimmermann,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
    euler_characteristic: Option<i64>,
    kind: BaseKind,
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, GroupError> {
        if names.is_empty() {
            return Err(GroupError::Parse("a presentation needs at least one generator".into()));
        }
        for r in &relators {
            if let Some(l) = r.letters.iter().find(|l| l.generator >= names.len()) {
                return Err(GroupError::GeneratorOutOfRange { index: l.generator, count: names.len() });
            }
        }
        Ok(Presentation { names, relators, euler_characteristic: None, kind: BaseKind::Custom })
    }

    /// Free group on `count` generators `u1, u2, ...`.
    pub fn free(count: usize) -> Result<Self, GroupError> {
        Presentation::new((1..=count).map(|i| format!("u{i}")).collect(), Vec::new())
    }

    pub fn with_euler_characteristic(mut self, chi: i64) -> Self {
        self.euler_characteristic = Some(chi);
        self
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn euler_characteristic(&self) -> Option<i64> {
        self.euler_characteristic
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn label(&self) -> String {
        match self.kind {
            BaseKind::Surface { genus } => format!("surface-{genus}"),
            BaseKind::Torus { rank } => format!("torus-{rank}"),
            BaseKind::PaoluzziZimmermann => "G31".to_string(),
            BaseKind::Custom => "custom".to_string(),
        }
    }
}

/// `<a1, b1, ..., ag, bg | [a1, b1] ... [ag, bg]>` with `chi = 2 - 2g`.
pub fn surface_presentation(genus: u32) -> Result<Presentation, GroupError> {
    if genus < 2 {
        return Err(GroupError::GenusTooSmall(genus));
    }
    let g = genus as usize;
    let names = (1..=g).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect();
    let relator = (0..g)
        .map(|i| Word::commutator(2 * i, 2 * i + 1))
        .fold(Word::default(), |acc, w| acc.concat(&w));
    let mut p = Presentation::new(names, vec![relator])?;
    p.euler_characteristic = Some(2 - 2 * genus as i64);
    p.kind = BaseKind::Surface { genus };
    Ok(p)
}

/// `G_{3,1} = <x0, x1, x2 | x0 x1^-1 x0^-1 x1 x2^-1 x1^-1 x2 x0^-1 x2^-1>`.
/// Its Euler characteristic is left unset; callers supply it.
pub fn pz_presentation() -> Presentation {
    let names: Vec<String> = ["x0", "x1", "x2"].iter().map(|s| s.to_string()).collect();
    let relator = Word::new(vec![
        Letter::gen(0),
        Letter::inv(1),
        Letter::inv(0),
        Letter::gen(1),
        Letter::inv(2),
        Letter::inv(1),
        Letter::gen(2),
        Letter::inv(0),
        Letter::inv(2),
    ]);
    let mut p = Presentation::new(names, vec![relator]).expect("static presentation");
    p.kind = BaseKind::PaoluzziZimmermann;
    p
}

/// `Z^rank` with all commutator relators; `chi = 0`.
pub fn torus_presentation(rank: u32) -> Result<Presentation, GroupError> {
    if rank == 0 {
        return Err(GroupError::Parse("torus rank must be positive".into()));
    }
    let r = rank as usize;
    let names = (1..=r).map(|i| format!("t{i}")).collect();
    let relators = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| Word::commutator(i, j)))
        .collect();
    let mut p = Presentation::new(names, relators)?;
    p.euler_characteristic = Some(0);
    p.kind = BaseKind::Torus { rank };
    Ok(p)
}

/// Text format: first non-comment line lists generator names, each following
/// line is one relator word such as `x0 x1^-1 x0^-1`. `#` starts a comment.
impl FromStr for Presentation {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| GroupError::Parse("empty presentation".into()))?;
        let names: Vec<String> = header.split_whitespace().map(str::to_string).collect();
        for (i, n) in names.iter().enumerate() {
            if n.contains('^') {
                return Err(GroupError::Parse(format!("generator name `{n}` contains `^`")));
            }
            if names[..i].contains(n) {
                return Err(GroupError::Parse(format!("duplicate generator `{n}`")));
            }
        }
        let relators = lines.map(|l| Word::parse(l, &names)).collect::<Result<_, _>>()?;
        Presentation::new(names, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.names.join(" "))?;
        for r in &self.relators {
            writeln!(f, "{}", r.display(&self.names))?;
        }
        Ok(())
    }
}

/// Signed occurrence count of each generator in `w`.
pub fn exponent_sum_vector(w: &Word, p: &Presentation) -> Result<Vec<i64>, GroupError> {
    let count = p.generator_count();
    let mut v = vec![0i64; count];
    for l in &w.letters {
        let slot = v
            .get_mut(l.generator)
            .ok_or(GroupError::GeneratorOutOfRange { index: l.generator, count })?;
        *slot += l.exponent();
    }
    Ok(v)
}

/// Outcome of checking a generator assignment against every relator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellDefinedness {
    /// Image in `Z^n` of each relator's exponent-sum vector.
    pub relator_images: Vec<Vec<BigInt>>,
}

impl WellDefinedness {
    pub fn is_well_defined(&self) -> bool {
        self.relator_images.iter().all(|img| img.iter().all(Zero::is_zero))
    }

    pub fn failing_relators(&self) -> impl Iterator<Item = usize> + '_ {
        self.relator_images
            .iter()
            .enumerate()
            .filter(|(_, img)| img.iter().any(|x| !x.is_zero()))
            .map(|(i, _)| i)
    }
}

/// Evaluates `R * exponent_sum_vector(r)` for every relator `r`.
pub fn check_hom_well_defined(p: &Presentation, r: &IntMatrix) -> Result<WellDefinedness, GroupError> {
    if r.cols() != p.generator_count() {
        return Err(GroupError::ShapeMismatch { expected: p.generator_count(), got: r.cols() });
    }
    let relator_images = p
        .relators
        .iter()
        .map(|w| {
            let v: Vec<BigInt> = exponent_sum_vector(w, p)?.into_iter().map(BigInt::from).collect();
            Ok(r.mul_vec(&v)?)
        })
        .collect::<Result<_, GroupError>>()?;
    Ok(WellDefinedness { relator_images })
}

/// Homomorphism `Gamma -> Z^n`; column `j` of the matrix is the image of
/// generator `j`. Only constructible when every relator maps to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomToZn {
    matrix: IntMatrix,
}

impl HomToZn {
    pub fn new(p: &Presentation, matrix: IntMatrix) -> Result<Self, GroupError> {
        let check = check_hom_well_defined(p, &matrix)?;
        if let Some(index) = check.failing_relators().next() {
            let image = check.relator_images[index]
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ");
            return Err(GroupError::NotAHomomorphism { index, image });
        }
        Ok(HomToZn { matrix })
    }

    pub fn zero(p: &Presentation, rank: usize) -> Result<Self, GroupError> {
        HomToZn::new(p, IntMatrix::zeros(rank, p.generator_count())?)
    }

    /// Sends generator `generator` to `value * e1` and every other generator to 0.
    pub fn on_generator(p: &Presentation, rank: usize, generator: usize, value: i64) -> Result<Self, GroupError> {
        let mut row = vec![BigInt::zero(); rank * p.generator_count()];
        let slot = row
            .get_mut(generator)
            .ok_or(GroupError::GeneratorOutOfRange { index: generator, count: p.generator_count() })?;
        *slot = BigInt::from(value);
        HomToZn::new(p, IntMatrix::new(rank, p.generator_count(), row)?)
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Image of an element given by its abelianized exponent vector.
    pub fn apply(&self, u: &[BigInt]) -> Result<Vec<BigInt>, GroupError> {
        Ok(self.matrix.mul_vec(u)?)
    }
}
