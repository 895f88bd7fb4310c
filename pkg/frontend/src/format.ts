// Display formatting. Percentile values render verbatim; the one derived
// display number is the complement below, audited by the e2e suite.

export const formatPercent = (p: number): string => `${(p * 100).toFixed(1)}%`;

// The decision task is about the risk of losing TA positions, so the table
// words the probability that way; the service reports P(Y <= 0).
export const probLosing = (pNonpos: number): number => 1 - pNonpos;

export const stanceClass = (label: string): string =>
  `stance-${label.toLowerCase().replace(/\s+/g, "-")}`;

export const escapeHtml = (text: string): string =>
  text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
