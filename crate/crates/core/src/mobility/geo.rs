use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::MobilityError;

/// Mean Earth radius (IUGG), km.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// Great-circle distance in km between two WGS-84 points given in degrees.
pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * a.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub lat: f64,
    pub lon: f64,
    pub city: Option<String>,
    pub country: Option<String>,
}

impl Location {
    pub fn distance_km(&self, other: &Location) -> f64 {
        haversine_km(self.lat, self.lon, other.lat, other.lon)
    }
}

#[derive(Debug, Deserialize)]
struct RegistryRow {
    institution_id: String,
    lat: f64,
    lon: f64,
    city: Option<String>,
    country: Option<String>,
}

/// Local geocoding table: institution id to coordinates and place names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LocationRegistry {
    entries: BTreeMap<String, Location>,
}

impl LocationRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, institution_id: &str, location: Location) -> Result<(), MobilityError> {
        if !(-90.0..=90.0).contains(&location.lat) || !(-180.0..=180.0).contains(&location.lon) {
            return Err(MobilityError::BadCoordinates {
                institution: institution_id.to_owned(),
                lat: location.lat,
                lon: location.lon,
            });
        }
        self.entries.insert(institution_id.to_owned(), location);
        Ok(())
    }

    pub fn get(&self, institution_id: &str) -> Option<&Location> {
        self.entries.get(institution_id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Location)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Reads `institution_id,lat,lon,city,country` CSV (header required).
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self, MobilityError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers().map_err(MobilityError::Csv)?.clone();
        let expected = ["institution_id", "lat", "lon", "city", "country"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(MobilityError::BadHeader(headers.iter().collect::<Vec<_>>().join(",")));
        }
        let mut registry = Self::new();
        for row in rdr.deserialize::<RegistryRow>() {
            let row = row.map_err(MobilityError::Csv)?;
            let blank_to_none = |s: Option<String>| s.filter(|v| !v.is_empty());
            registry.insert(
                &row.institution_id,
                Location {
                    lat: row.lat,
                    lon: row.lon,
                    city: blank_to_none(row.city),
                    country: blank_to_none(row.country),
                },
            )?;
        }
        Ok(registry)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self, MobilityError> {
        let file = std::fs::File::open(path).map_err(|source| MobilityError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_csv_reader(file)
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<(), MobilityError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["institution_id", "lat", "lon", "city", "country"])
            .map_err(MobilityError::Csv)?;
        for (id, loc) in &self.entries {
            w.write_record([
                id.as_str(),
                &loc.lat.to_string(),
                &loc.lon.to_string(),
                loc.city.as_deref().unwrap_or(""),
                loc.country.as_deref().unwrap_or(""),
            ])
            .map_err(MobilityError::Csv)?;
        }
        w.flush().map_err(|source| MobilityError::Io {
            path: "<registry>".into(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pisa_rome() {
        // independent evaluation (Python math module, R = 6371.0088): 264.8472 km
        let d = haversine_km(43.7167, 10.4000, 41.9000, 12.5000);
        assert!((d - 264.847).abs() < 1.0, "{d}");
        assert!((d - 264.8472164).abs() < 1e-6, "{d}");
    }

    #[test]
    fn registry_csv() {
        let text = "institution_id,lat,lon,city,country\nunipi,43.7167,10.4,Pisa,IT\nremote,0,0,,\n";
        let reg = LocationRegistry::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(reg.len(), 2);
        assert_eq!(reg.get("unipi").unwrap().city.as_deref(), Some("Pisa"));
        assert_eq!(reg.get("remote").unwrap().country, None);
        let mut out = Vec::new();
        reg.write_csv(&mut out).unwrap();
        assert_eq!(LocationRegistry::from_csv_reader(out.as_slice()).unwrap(), reg);
    }

    #[test]
    fn registry_rejects_bad_rows() {
        let bad_lat = "institution_id,lat,lon,city,country\nx,91,0,,\n";
        assert!(matches!(
            LocationRegistry::from_csv_reader(bad_lat.as_bytes()),
            Err(MobilityError::BadCoordinates { .. })
        ));
        let bad_header = "id,lat,lon,city,country\nx,1,0,,\n";
        assert!(matches!(
            LocationRegistry::from_csv_reader(bad_header.as_bytes()),
            Err(MobilityError::BadHeader(_))
        ));
    }

    fn point() -> impl Strategy<Value = (f64, f64)> {
        (-90.0f64..90.0, -180.0f64..180.0)
    }

    proptest! {
        #[test]
        fn metric_axioms(a in point(), b in point(), c in point()) {
            prop_assert_eq!(haversine_km(a.0, a.1, a.0, a.1), 0.0);
            let ab = haversine_km(a.0, a.1, b.0, b.1);
            let ba = haversine_km(b.0, b.1, a.0, a.1);
            prop_assert!((ab - ba).abs() < 1e-9);
            let bc = haversine_km(b.0, b.1, c.0, c.1);
            let ac = haversine_km(a.0, a.1, c.0, c.1);
            prop_assert!(ac <= ab + bc + 1e-6);
        }
    }
}
