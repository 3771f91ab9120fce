/**
 * Result views: the teacher's four-source table with the final qualificative,
 * per-competency bars, the commission's anonymized cohort view and the
 * access-denied screen. All values render verbatim from API payloads.
 */

import { ApiClient, ApiError, FinalPayload, ScoresPayload, Statistics } from "./api.js";
import { COMPETENCY_LABELS, qualificativeLabel } from "./labels.js";

export interface TeacherDashboardData {
  teacherId: string;
  campaignId: string;
  final: FinalPayload;
  student: ScoresPayload | null;
  self: ScoresPayload | null;
}

function cell(text: string, cls?: string): HTMLTableCellElement {
  const td = document.createElement("td");
  td.textContent = text;
  if (cls) {
    td.className = cls;
  }
  return td;
}

export function renderTeacherDashboard(container: HTMLElement, data: TeacherDashboardData): void {
  container.innerHTML = "";
  const heading = document.createElement("h2");
  heading.textContent = `Evaluation of ${data.teacherId} – campaign ${data.campaignId}`;
  container.append(heading);

  const table = document.createElement("table");
  table.className = "final-table";
  table.dataset.testid = "final-table";
  const head = document.createElement("tr");
  for (const title of ["No", "Criteria", "Qualificative", "Mark"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.append(th);
  }
  table.append(head);

  const rows: [string, string, string, string][] = [
    ["1", "Fellow-like evaluation", qualificativeLabel(data.final.collegial), "-"],
    ["2", "Chief of staff's evaluation", "-", data.final.chief_score.toFixed(2)],
    ["3", "Student's evaluation", "-", data.final.student_score.toFixed(2)],
    ["4", "Self evaluation", "-", data.final.self_score.toFixed(2)],
  ];
  for (const [no, label, qualificative, mark] of rows) {
    const tr = document.createElement("tr");
    tr.className = "source-row";
    tr.append(cell(no), cell(label), cell(qualificative, "qualificative"), cell(mark, "mark"));
    table.append(tr);
  }
  const finalRow = document.createElement("tr");
  finalRow.className = "final-row";
  finalRow.dataset.testid = "final-row";
  finalRow.append(
    cell(""),
    cell("FINAL RESULT"),
    cell(qualificativeLabel(data.final.final_qualificative), "qualificative"),
    cell(data.final.final_score.toFixed(4), "mark"),
  );
  table.append(finalRow);
  container.append(table);

  for (const [source, payload] of [["student", data.student], ["self", data.self]] as const) {
    if (!payload) {
      continue;
    }
    const section = document.createElement("section");
    section.className = "bars";
    const title = document.createElement("h3");
    title.textContent = source === "student"
      ? `Student questionnaire (${payload.sheet_count} sheets)`
      : "Self evaluation";
    section.append(title);
    for (const [competency, value] of Object.entries(payload.per_competency)) {
      const row = document.createElement("div");
      row.className = "bar-row";
      row.dataset.competency = competency;
      const label = document.createElement("span");
      label.className = "bar-label";
      label.textContent = COMPETENCY_LABELS[competency] ?? competency;
      const track = document.createElement("div");
      track.className = "bar-track";
      const fill = document.createElement("div");
      fill.className = "bar-fill";
      fill.style.width = `${(value / 5) * 100}%`;
      const number = document.createElement("span");
      number.className = "bar-value";
      number.textContent = value.toFixed(2);
      track.append(fill);
      row.append(label, track, number);
      section.append(row);
    }
    container.append(section);
  }
}

export function renderCohortView(container: HTMLElement, stats: Statistics): void {
  container.innerHTML = "";
  const heading = document.createElement("h2");
  const where = stats.name ? `${stats.grouping} "${stats.name}"` : stats.grouping;
  heading.textContent = `Cohort statistics – campaign ${stats.campaign_id}, ${where}`;
  container.append(heading);
  const note = document.createElement("p");
  note.className = "anonymity-note";
  note.textContent = `${stats.count} teacher(s), no identities shown.`;
  container.append(note);
  const list = document.createElement("ul");
  list.className = "cohort";
  list.dataset.testid = "cohort";
  for (const [competency, entry] of Object.entries(stats.competencies)) {
    const li = document.createElement("li");
    li.dataset.competency = competency;
    li.textContent = `${COMPETENCY_LABELS[competency] ?? competency}: ` +
      `between ${entry.min.toFixed(2)} and ${entry.max.toFixed(2)} ` +
      `(mean ${entry.mean.toFixed(2)})`;
    list.append(li);
  }
  container.append(list);
}

export function renderAccessDenied(container: HTMLElement, error: ApiError): void {
  container.innerHTML = "";
  const box = document.createElement("div");
  box.className = "access-denied";
  box.dataset.testid = "access-denied";
  box.innerHTML = `<h2>Access denied</h2>
    <p>These results are confidential. ${error.message}</p>`;
  container.append(box);
}

/** Load the four-source view for one teacher; a 403 renders the denied view. */
export async function loadTeacherDashboard(
  client: ApiClient,
  container: HTMLElement,
  teacherId: string,
  campaignId: string,
): Promise<void> {
  try {
    const final = await client.getResult<FinalPayload>(teacherId, campaignId, "final");
    let student: ScoresPayload | null = null;
    let self: ScoresPayload | null = null;
    try {
      student = (await client.getResult<ScoresPayload>(teacherId, campaignId, "student")).payload;
      self = (await client.getResult<ScoresPayload>(teacherId, campaignId, "self")).payload;
    } catch (error) {
      if (!(error instanceof ApiError) || error.code !== "NotFound") {
        throw error;
      }
    }
    renderTeacherDashboard(container, {
      teacherId,
      campaignId,
      final: final.payload,
      student,
      self,
    });
  } catch (error) {
    if (error instanceof ApiError && error.code === "Denied") {
      renderAccessDenied(container, error);
      return;
    }
    throw error;
  }
}
