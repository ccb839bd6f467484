use std::fmt;

use super::MineError;

/// Up to two characters of one side of a multigram.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Segment {
    len: u8,
    chars: [char; 2],
}

impl Segment {
    pub const EMPTY: Segment = Segment {
        len: 0,
        chars: ['\0'; 2],
    };

    pub fn new(chars: &[char]) -> Option<Segment> {
        match *chars {
            [] => Some(Segment::EMPTY),
            [a] => Some(Segment { len: 1, chars: [a, '\0'] }),
            [a, b] => Some(Segment { len: 2, chars: [a, b] }),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Option<Segment> {
        let chars: Vec<char> = s.chars().collect();
        Segment::new(&chars)
    }

    pub fn chars(&self) -> &[char] {
        &self.chars[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.chars() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Segment lengths of a multigram, `(source, target)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Shape {
    pub src: u8,
    pub tgt: u8,
}

impl Shape {
    pub const DELETION: Shape = Shape { src: 1, tgt: 0 };
    pub const INSERTION: Shape = Shape { src: 0, tgt: 1 };
    pub const ONE_TO_ONE: Shape = Shape { src: 1, tgt: 1 };
    pub const ONE_TO_TWO: Shape = Shape { src: 1, tgt: 2 };
    pub const TWO_TO_ONE: Shape = Shape { src: 2, tgt: 1 };

    /// Default set. The two-character shapes let EM memorize unrelated
    /// pairs, since each gets multigrams no other pair shares.
    pub const BASIC: [Shape; 3] = [Shape::DELETION, Shape::INSERTION, Shape::ONE_TO_ONE];

    pub const ALL: [Shape; 5] = [
        Shape::DELETION,
        Shape::INSERTION,
        Shape::ONE_TO_ONE,
        Shape::ONE_TO_TWO,
        Shape::TWO_TO_ONE,
    ];

    pub fn new(src: u8, tgt: u8) -> Result<Shape, MineError> {
        let shape = Shape { src, tgt };
        if Shape::ALL.contains(&shape) {
            Ok(shape)
        } else {
            Err(MineError::InvalidShape(src, tgt))
        }
    }

    /// Checks every shape and returns a sorted, deduplicated copy.
    pub fn validate_set(shapes: &[Shape]) -> Result<Vec<Shape>, MineError> {
        if shapes.is_empty() {
            return Err(MineError::NoShapes);
        }
        let mut out = Vec::with_capacity(shapes.len());
        for s in shapes {
            out.push(Shape::new(s.src, s.tgt)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// A paired source/target character segment.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Multigram {
    pub src: Segment,
    pub tgt: Segment,
}

impl Multigram {
    /// Fails for segment pairs whose shape is not permitted.
    pub fn new(src: &[char], tgt: &[char]) -> Result<Multigram, MineError> {
        let shape_err = || MineError::InvalidShape(src.len().min(255) as u8, tgt.len().min(255) as u8);
        let (s, t) = (
            Segment::new(src).ok_or_else(shape_err)?,
            Segment::new(tgt).ok_or_else(shape_err)?,
        );
        Shape::new(s.len, t.len)?;
        Ok(Multigram { src: s, tgt: t })
    }

    pub(crate) fn unchecked(src: &[char], tgt: &[char]) -> Multigram {
        Multigram {
            src: Segment::new(src).expect("segment of at most two chars"),
            tgt: Segment::new(tgt).expect("segment of at most two chars"),
        }
    }

    pub fn shape(&self) -> Shape {
        Shape {
            src: self.src.len,
            tgt: self.tgt.len,
        }
    }
}

impl fmt::Display for Multigram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.src, self.tgt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permitted_shapes_only() {
        assert!(Multigram::new(&['a'], &['x']).is_ok());
        assert!(Multigram::new(&['a'], &['k', 'h']).is_ok());
        assert!(Multigram::new(&[], &['x']).is_ok());
        assert_eq!(Multigram::new(&[], &[]), Err(MineError::InvalidShape(0, 0)));
        assert_eq!(Multigram::new(&['a', 'b'], &['x', 'y']), Err(MineError::InvalidShape(2, 2)));
        assert_eq!(Multigram::new(&['a', 'b'], &[]), Err(MineError::InvalidShape(2, 0)));
        assert_eq!(Multigram::new(&['a', 'b', 'c'], &['x']), Err(MineError::InvalidShape(3, 1)));
    }

    #[test]
    fn shape_sets() {
        assert_eq!(Shape::validate_set(&[]), Err(MineError::NoShapes));
        assert_eq!(
            Shape::validate_set(&[Shape::ONE_TO_ONE, Shape::ONE_TO_ONE]).unwrap(),
            vec![Shape::ONE_TO_ONE]
        );
        assert!(Shape::validate_set(&[Shape { src: 0, tgt: 0 }]).is_err());
    }

    #[test]
    fn segment_display_and_parse() {
        let s = Segment::parse("kh").unwrap();
        assert_eq!(s.to_string(), "kh");
        assert_eq!(Segment::parse(""), Some(Segment::EMPTY));
        assert_eq!(Segment::parse("abc"), None);
    }
}
