//! Demographic records and their dummy encoding.
//!
//! The encoding yields exactly 14 entries: age (continuous), three education
//! indicators, nine employment indicators, and one sex indicator. Reference
//! categories (some_high_school, full_time, male) are represented implicitly
//! by all-zero indicator blocks.

use std::io::{BufRead, Write};

use super::CorpusError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sex {
    Male,
    Female,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Education {
    SomeHighSchool,
    HighSchool,
    SomeCollege,
    College,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Employment {
    FullTime,
    PartTime,
    Retired,
    Unemployed,
    Disability,
    Never,
    Volunteer,
    Student,
    Homemaker,
    Other,
}

impl Sex {
    pub fn as_str(self) -> &'static str {
        match self {
            Sex::Male => "male",
            Sex::Female => "female",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "male" => Some(Sex::Male),
            "female" => Some(Sex::Female),
            _ => None,
        }
    }
}

impl Education {
    pub fn as_str(self) -> &'static str {
        match self {
            Education::SomeHighSchool => "some_high_school",
            Education::HighSchool => "high_school",
            Education::SomeCollege => "some_college",
            Education::College => "college",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "some_high_school" => Some(Education::SomeHighSchool),
            "high_school" => Some(Education::HighSchool),
            "some_college" => Some(Education::SomeCollege),
            "college" => Some(Education::College),
            _ => None,
        }
    }
}

impl Employment {
    pub fn as_str(self) -> &'static str {
        match self {
            Employment::FullTime => "full_time",
            Employment::PartTime => "part_time",
            Employment::Retired => "retired",
            Employment::Unemployed => "unemployed",
            Employment::Disability => "disability",
            Employment::Never => "never",
            Employment::Volunteer => "volunteer",
            Employment::Student => "student",
            Employment::Homemaker => "homemaker",
            Employment::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full_time" => Some(Employment::FullTime),
            "part_time" => Some(Employment::PartTime),
            "retired" => Some(Employment::Retired),
            "unemployed" => Some(Employment::Unemployed),
            "disability" => Some(Employment::Disability),
            "never" => Some(Employment::Never),
            "volunteer" => Some(Employment::Volunteer),
            "student" => Some(Employment::Student),
            "homemaker" => Some(Employment::Homemaker),
            "other" => Some(Employment::Other),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemographicRecord {
    pub age: f64,
    pub sex: Sex,
    pub education: Education,
    pub employment: Employment,
}

pub const DEMOGRAPHIC_FEATURE_NAMES: [&str; 14] = [
    "age",
    "edu_high_school",
    "edu_some_college",
    "edu_college",
    "emp_part_time",
    "emp_retired",
    "emp_unemployed",
    "emp_disability",
    "emp_never",
    "emp_volunteer",
    "emp_student",
    "emp_homemaker",
    "emp_other",
    "sex_female",
];

/// Encode a record as the fixed 14-entry block named by
/// [`DEMOGRAPHIC_FEATURE_NAMES`].
pub fn encode_demographics(rec: &DemographicRecord) -> [f64; 14] {
    let mut v = [0.0; 14];
    v[0] = rec.age;
    match rec.education {
        Education::SomeHighSchool => {}
        Education::HighSchool => v[1] = 1.0,
        Education::SomeCollege => v[2] = 1.0,
        Education::College => v[3] = 1.0,
    }
    match rec.employment {
        Employment::FullTime => {}
        Employment::PartTime => v[4] = 1.0,
        Employment::Retired => v[5] = 1.0,
        Employment::Unemployed => v[6] = 1.0,
        Employment::Disability => v[7] = 1.0,
        Employment::Never => v[8] = 1.0,
        Employment::Volunteer => v[9] = 1.0,
        Employment::Student => v[10] = 1.0,
        Employment::Homemaker => v[11] = 1.0,
        Employment::Other => v[12] = 1.0,
    }
    if rec.sex == Sex::Female {
        v[13] = 1.0;
    }
    v
}

/// Parse `subject_id,age,sex,education,employment,outcome` rows.
pub fn read_demographics_csv(
    input: impl BufRead,
) -> Result<Vec<(String, DemographicRecord, u8)>, CorpusError> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| CorpusError::Parse {
        line: 1,
        message: "empty file".to_string(),
    })?;
    let header = header?;
    if header.trim_end() != "subject_id,age,sex,education,employment,outcome" {
        return Err(CorpusError::Parse {
            line: 1,
            message: "unexpected demographics header".to_string(),
        });
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 6 {
            return Err(CorpusError::Parse {
                line: lineno,
                message: format!("expected 6 fields, found {}", fields.len()),
            });
        }
        let parse_err = |what: &str, value: &str| CorpusError::Parse {
            line: lineno,
            message: format!("invalid {what} '{value}'"),
        };
        let age: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| parse_err("age", fields[1]))?;
        let sex = Sex::parse(fields[2].trim()).ok_or_else(|| parse_err("sex", fields[2]))?;
        let education = Education::parse(fields[3].trim())
            .ok_or_else(|| parse_err("education", fields[3]))?;
        let employment = Employment::parse(fields[4].trim())
            .ok_or_else(|| parse_err("employment", fields[4]))?;
        let outcome: u8 = match fields[5].trim() {
            "0" => 0,
            "1" => 1,
            other => return Err(parse_err("outcome", other)),
        };
        rows.push((
            fields[0].trim().to_string(),
            DemographicRecord {
                age,
                sex,
                education,
                employment,
            },
            outcome,
        ));
    }
    Ok(rows)
}

pub fn write_demographics_csv(
    rows: &[(String, DemographicRecord, u8)],
    mut out: impl Write,
) -> Result<(), CorpusError> {
    writeln!(out, "subject_id,age,sex,education,employment,outcome")?;
    for (id, rec, outcome) in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            id,
            rec.age,
            rec.sex.as_str(),
            rec.education.as_str(),
            rec.employment.as_str(),
            outcome
        )?;
    }
    Ok(())
}
