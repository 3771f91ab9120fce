/** Presentation labels for wire enum values. English ships as the default;
 * swap this module for a localized build. */

export const QUALIFICATIVE_LABELS: Record<string, string> = {
  very_good: "Very Good",
  good: "Good",
  medium: "Medium",
  poor: "Poor",
  very_poor: "Very Poor",
};

export const QUALIFICATIVE_VALUES = ["very_good", "good", "medium", "poor", "very_poor"];

export const COMPETENCY_LABELS: Record<string, string> = {
  scientific: "Scientific",
  psycho_pedagogical: "Psycho-pedagogical",
  psychosocial: "Psychosocial",
  managerial: "Managerial",
};

export const COLLEGIAL_CRITERIA: Record<string, string> = {
  teaching_activity_content: "Teaching activity content",
  lesson_organization_presentation: "Lesson organization and presentation",
  lesson_clarity: "Lesson clarity",
  connection_to_students: "Connection to the students",
};

export const PHASE_LABELS: Record<string, string> = {
  pre_observation: "Pre-observation",
  observation: "Observation",
  post_observation: "Post-observation",
  complete: "Complete",
};

export function qualificativeLabel(value: string | null | undefined): string {
  if (!value) {
    return "-";
  }
  return QUALIFICATIVE_LABELS[value] ?? value;
}
