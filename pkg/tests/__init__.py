# Test package for GeoSpec
