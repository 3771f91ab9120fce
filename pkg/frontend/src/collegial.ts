/**
 * Collegial observation screen: a stepper that enforces the phase order
 * (pre-observation, observation, post-observation, complete), captures the
 * two consents, the per-phase discussion notes and the four criterion marks,
 * and shows the server-computed result once complete.
 */

import { ApiClient, ApiError, CollegialRecord } from "./api.js";
import {
  COLLEGIAL_CRITERIA,
  PHASE_LABELS,
  QUALIFICATIVE_LABELS,
  QUALIFICATIVE_VALUES,
  qualificativeLabel,
} from "./labels.js";

const PHASES = ["pre_observation", "observation", "post_observation", "complete"];

export interface CollegialScreenOptions {
  container: HTMLElement;
  client: ApiClient;
  record: CollegialRecord;
  onUpdated?: (record: CollegialRecord) => void;
}

function stepper(record: CollegialRecord): HTMLElement {
  const list = document.createElement("ol");
  list.className = "stepper";
  list.dataset.testid = "stepper";
  const currentIndex = PHASES.indexOf(record.phase);
  PHASES.forEach((phase, index) => {
    const item = document.createElement("li");
    item.dataset.phase = phase;
    item.textContent = PHASE_LABELS[phase] ?? phase;
    item.className = index < currentIndex ? "done" : index === currentIndex ? "current" : "ahead";
    list.append(item);
  });
  return list;
}

function notesHistory(record: CollegialRecord): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "notes-history";
  for (const phase of PHASES) {
    const note = record.phase_notes[phase];
    if (!note) {
      continue;
    }
    const entry = document.createElement("p");
    entry.className = "note";
    entry.dataset.phase = phase;
    entry.textContent = `${PHASE_LABELS[phase]}: ${note}`;
    wrap.append(entry);
  }
  return wrap;
}

export function renderCollegialScreen(options: CollegialScreenOptions): void {
  const { container, client, record } = options;
  container.innerHTML = "";

  const heading = document.createElement("h2");
  heading.textContent =
    `Collegial evaluation of ${record.evaluated_teacher_id} by ${record.evaluator_teacher_id}`;
  const error = document.createElement("div");
  error.className = "error";
  error.dataset.testid = "error";

  const rerender = (updated: CollegialRecord) => {
    options.onUpdated?.(updated);
    renderCollegialScreen({ ...options, record: updated });
  };
  const run = async (call: () => Promise<CollegialRecord>) => {
    try {
      rerender(await call());
    } catch (failure) {
      error.textContent = failure instanceof ApiError
        ? `${failure.code}: ${failure.message}`
        : String(failure);
    }
  };

  container.append(heading, stepper(record));

  if (record.voided) {
    const voided = document.createElement("p");
    voided.className = "voided";
    voided.dataset.testid = "voided";
    voided.textContent =
      "The evaluator declined this appointment; the record is void and a new appointment is required.";
    container.append(voided, notesHistory(record));
    return;
  }

  if (record.phase === "pre_observation") {
    const consents = document.createElement("div");
    consents.className = "consents";
    for (const party of ["evaluated", "evaluator"] as const) {
      const given = party === "evaluated" ? record.evaluated_consent : record.evaluator_consent;
      const row = document.createElement("div");
      row.className = "consent-row";
      row.dataset.party = party;
      const label = document.createElement("span");
      label.textContent = `${party}: ${given ? "consented" : "pending"}`;
      row.append(label);
      if (!given) {
        const agree = document.createElement("button");
        agree.textContent = "Consent";
        agree.dataset.testid = `consent-${party}`;
        agree.addEventListener("click", () => run(() => client.consent(record.evaluation_id, party, true)));
        row.append(agree);
        if (party === "evaluator") {
          // Participation is voluntary for the evaluator only.
          const decline = document.createElement("button");
          decline.textContent = "Decline";
          decline.dataset.testid = "decline-evaluator";
          decline.addEventListener("click", () => run(() => client.consent(record.evaluation_id, party, false)));
          row.append(decline);
        }
      }
      consents.append(row);
    }
    container.append(consents);
  }

  if (record.phase === "observation" || record.phase === "post_observation") {
    const marks = document.createElement("div");
    marks.className = "marks";
    marks.dataset.testid = "marks";
    const selects = new Map<string, HTMLSelectElement>();
    for (const [criterion, label] of Object.entries(COLLEGIAL_CRITERIA)) {
      const row = document.createElement("label");
      row.className = "mark-row";
      row.textContent = label + " ";
      const select = document.createElement("select");
      select.dataset.criterion = criterion;
      const blank = document.createElement("option");
      blank.value = "";
      blank.textContent = "– not marked –";
      select.append(blank);
      for (const value of QUALIFICATIVE_VALUES) {
        const option = document.createElement("option");
        option.value = value;
        option.textContent = QUALIFICATIVE_LABELS[value] ?? value;
        select.append(option);
      }
      select.value = record.criteria_marks[criterion] ?? "";
      selects.set(criterion, select);
      row.append(select);
      marks.append(row);
    }
    const save = document.createElement("button");
    save.textContent = "Save marks";
    save.dataset.testid = "save-marks";
    save.addEventListener("click", () => {
      const chosen: Record<string, string> = {};
      for (const [criterion, select] of selects) {
        if (select.value) {
          chosen[criterion] = select.value;
        }
      }
      void run(() => client.recordMarks(record.evaluation_id, chosen));
    });
    marks.append(save);
    container.append(marks);
  }

  if (record.phase !== "complete") {
    const advance = document.createElement("div");
    advance.className = "advance";
    const notes = document.createElement("textarea");
    notes.placeholder = "Notes of the discussion for this phase (required)";
    notes.dataset.testid = "notes";
    const button = document.createElement("button");
    button.dataset.testid = "advance";
    button.textContent = record.phase === "post_observation"
      ? "Close with conclusions"
      : `Advance to ${PHASE_LABELS[PHASES[PHASES.indexOf(record.phase) + 1] ?? ""] ?? "next phase"}`;
    button.addEventListener("click", () => run(() => client.advance(record.evaluation_id, notes.value)));
    advance.append(notes, button);
    container.append(advance);
  } else {
    const result = document.createElement("p");
    result.className = "result";
    result.dataset.testid = "result";
    result.textContent = `Result: ${qualificativeLabel(record.result)}`;
    container.append(result);
  }

  container.append(notesHistory(record), error);
}
