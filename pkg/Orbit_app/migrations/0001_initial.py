# Generated by Django 4.2.16

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='OrbitSnapshot',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('group', models.CharField(choices=[('sl', 'SL_n'), ('sp', 'Sp_2n')], max_length=2)),
                ('p', models.PositiveIntegerField(help_text='Residual characteristic of Q_p.')),
                ('n', models.PositiveIntegerField()),
                ('orbit_id', models.CharField(help_text='Stable id, e.g. sp:[2,2]:Q2=det:-1,hasse:+1', max_length=255)),
                ('partition', models.CharField(max_length=100)),
                ('class_label', models.JSONField(default=dict)),
                ('facet_dim', models.IntegerField()),
                ('equalities', models.JSONField(default=list)),
                ('triple_ok', models.BooleanField(default=False)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'ordering': ['group', 'p', 'n', 'orbit_id'],
                'unique_together': {('group', 'p', 'orbit_id')},
            },
        ),
    ]
